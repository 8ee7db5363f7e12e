#pragma once

#include <cstdint>
#include <vector>

#include "sentord/corpus.hpp"
#include "sentord/model.hpp"
#include "sentord/ranker.hpp"

namespace sentord {

struct DecodedOrder {
    std::vector<int> order;  // 0-based sentence indices in predicted reading order
    double award = 0.0;      // accumulated sum of log pair probabilities
};

/// Beam search over permutations: start one hypothesis per sentence, extend
/// with every unused index, keep the beam_size best by award (ties broken
/// lexicographically on the partial order).
DecodedOrder beam_search_decode_scored(const PairMatrix& pm, std::size_t beam_size);
std::vector<int> beam_search_decode(const PairMatrix& pm, std::size_t beam_size);

/// Exhaustive argmax over all n! permutations; n capped at 8.
std::vector<int> brute_force_decode(const PairMatrix& pm);

struct PredictOptions {
    std::size_t beam_size = 128;
    std::uint64_t shuffle_seed = 0;
    std::size_t threads = 1;
};

/// Decodes every document. Documents without an explicit gold arrangement are
/// presented to the decoder under a per-document seeded shuffle so input
/// position cannot leak. Results keep input order.
std::vector<PredictionRecord> predict_corpus(const std::vector<Document>& docs,
                                             const ModelBundle& model,
                                             const PredictOptions& opts);

}  // namespace sentord

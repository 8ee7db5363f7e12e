#pragma once

#include <vector>

#include "sentord/model.hpp"
#include "sentord/tape.hpp"

namespace sentord {

/// Inference path: no gradient bookkeeping, arithmetic identical to the tape
/// path so both produce bit-equal embeddings.
Tensor encode_sentence(const ModelBundle& m, const std::vector<int>& ids);

struct EncodedSentence {
    Var rows;             // looked-up token embeddings (padded length for cnn)
    Var sentence;         // (d,) embedding
    std::size_t n_words;  // token count before padding
};

/// Training/attribution path; per-word gradients are read from `rows` after
/// backward().
EncodedSentence encode_sentence(Tape& t, ModelBundle& m, const std::vector<int>& ids);

}  // namespace sentord

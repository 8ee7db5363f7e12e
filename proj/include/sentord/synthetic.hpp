#pragma once

#include <cstdint>
#include <vector>

#include "sentord/corpus.hpp"

namespace sentord {

/// Texts of 3-6 sentences, each opening with an ordinal marker ("First,"
/// "Second," ...) followed by filler words, so position is fully determined
/// by the marker. Categories rotate over the seven arXiv groups.
std::vector<RawRecord> make_ordinal_corpus(std::size_t texts, std::uint64_t seed);
std::vector<Document> make_ordinal_documents(std::size_t texts, std::uint64_t seed);

/// Per-text sentence counts drawn from a fixed distribution over 2..10 whose
/// mean is exactly 5.38; counts per length are deterministic.
std::vector<std::size_t> baseline_length_sample(std::size_t texts);

extern const std::vector<std::string> kOrdinalMarkers;  // lowercase forms

}  // namespace sentord

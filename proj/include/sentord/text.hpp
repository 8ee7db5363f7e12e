#pragma once

#include <string>
#include <vector>

namespace sentord {

/// Rule-based sentence splitter: breaks after . ! ? when followed by
/// whitespace and an uppercase letter or digit (or end of text). A built-in
/// abbreviation list and single-letter initials suppress false splits.
std::vector<std::string> split_sentences(const std::string& text);

/// Lowercase, split on whitespace, peel leading/trailing punctuation into
/// standalone tokens. Internal punctuation stays ("don't", "3.5").
std::vector<std::string> tokenize(const std::string& sentence);

}  // namespace sentord

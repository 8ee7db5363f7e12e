#include "sentord/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string_view>

#include "sentord/errors.hpp"

namespace sentord {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
char to_lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

constexpr std::array<std::string_view, 21> kAbbreviations = {
    "al",  "cf",  "dr",  "e.g", "eq",  "eqs", "etc", "fig", "figs", "i.e", "mr",
    "mrs", "ms",  "no",  "pp",  "prof", "ref", "resp", "sec", "vol", "vs"};

// True when the word ending right before text[dot] is an abbreviation or a
// single-letter initial, so the period is not a sentence end.
bool suppressed_period(const std::string& text, std::size_t dot) {
    std::size_t end = dot;
    std::size_t begin = end;
    while (begin > 0 && !is_space(text[begin - 1])) --begin;
    std::string_view word(text.data() + begin, end - begin);
    while (!word.empty() && is_punct(word.front())) word.remove_prefix(1);
    if (word.empty()) return false;
    if (word.size() == 1 && is_upper(word[0])) return true;
    std::string lower;
    lower.reserve(word.size());
    for (char c : word) lower.push_back(to_lower(c));
    return std::find(kAbbreviations.begin(), kAbbreviations.end(), lower) != kAbbreviations.end();
}

}  // namespace

std::vector<std::string> split_sentences(const std::string& text) {
    if (trim(text).empty()) throw EmptyText();
    std::vector<std::string> out;
    const std::size_t n = text.size();
    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        std::size_t k = i + 1;
        if (k < n && !is_space(text[k])) continue;
        while (k < n && is_space(text[k])) ++k;
        if (k < n) {
            if (!is_upper(text[k]) && !is_digit(text[k])) continue;
            if (c == '.' && suppressed_period(text, i)) continue;
        }
        std::string_view piece = trim(std::string_view(text).substr(start, i + 1 - start));
        if (!piece.empty()) out.emplace_back(piece);
        start = k;
        i = k - 1;
    }
    if (start < n) {
        std::string_view piece = trim(std::string_view(text).substr(start));
        if (!piece.empty()) out.emplace_back(piece);
    }
    if (out.empty()) throw EmptyText();
    return out;
}

std::vector<std::string> tokenize(const std::string& sentence) {
    std::vector<std::string> out;
    const std::size_t n = sentence.size();
    std::size_t i = 0;
    while (i < n) {
        while (i < n && is_space(sentence[i])) ++i;
        if (i >= n) break;
        std::size_t j = i;
        while (j < n && !is_space(sentence[j])) ++j;
        std::string w = sentence.substr(i, j - i);
        for (char& ch : w) ch = to_lower(ch);
        std::size_t b = 0;
        std::size_t e = w.size();
        while (b < e && is_punct(w[b])) {
            out.emplace_back(1, w[b]);
            ++b;
        }
        std::size_t core_end = e;
        while (core_end > b && is_punct(w[core_end - 1])) --core_end;
        if (core_end > b) out.push_back(w.substr(b, core_end - b));
        for (std::size_t k = core_end; k < e; ++k) out.emplace_back(1, w[k]);
        i = j;
    }
    return out;
}

}  // namespace sentord

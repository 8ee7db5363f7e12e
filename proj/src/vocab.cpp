#include "sentord/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sentord/errors.hpp"

namespace sentord {

Vocabulary::Vocabulary() {
    insert("<unk>", 0);
    insert("<pad>", 0);
}

void Vocabulary::insert(std::string token, std::uint64_t f) {
    index_[token] = static_cast<int>(tokens_.size());
    tokens_.push_back(std::move(token));
    freqs_.push_back(f);
}

Vocabulary Vocabulary::from_counts(const std::map<std::string, std::uint64_t>& counts,
                                   std::size_t min_freq) {
    Vocabulary v;
    std::vector<std::pair<std::string, std::uint64_t>> kept;
    for (const auto& [tok, f] : counts) {
        if (f < min_freq) continue;
        if (tok == "<unk>" || tok == "<pad>") continue;
        kept.emplace_back(tok, f);
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    for (auto& [tok, f] : kept) v.insert(std::move(tok), f);
    return v;
}

int Vocabulary::id(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(int i) const {
    if (i < 0 || static_cast<std::size_t>(i) >= tokens_.size()) {
        throw DataError("vocabulary id " + std::to_string(i) + " out of range");
    }
    return tokens_[static_cast<std::size_t>(i)];
}

std::uint64_t Vocabulary::freq(int i) const {
    if (i < 0 || static_cast<std::size_t>(i) >= freqs_.size()) {
        throw DataError("vocabulary id " + std::to_string(i) + " out of range");
    }
    return freqs_[static_cast<std::size_t>(i)];
}

std::vector<int> Vocabulary::encode(const std::vector<std::string>& tokens) const {
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) ids.push_back(id(t));
    return ids;
}

std::vector<std::string> Vocabulary::decode(const std::vector<int>& ids) const {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (int i : ids) out.push_back(token(i));
    return out;
}

void Vocabulary::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path + " for writing");
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        f << i << '\t' << tokens_[i] << '\t' << freqs_[i] << '\n';
    }
    if (!f) throw DataError("failed writing " + path);
}

Vocabulary Vocabulary::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path);
    Vocabulary v;
    v.tokens_.clear();
    v.freqs_.clear();
    v.index_.clear();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string id_field, token, freq_field;
        if (!std::getline(ss, id_field, '\t') || !std::getline(ss, token, '\t') ||
            !std::getline(ss, freq_field)) {
            throw UnsupportedFormat(path + ":" + std::to_string(lineno) + ": expected id\\ttoken\\tfreq");
        }
        std::uint64_t id_val = 0, freq_val = 0;
        try {
            id_val = std::stoull(id_field);
            freq_val = std::stoull(freq_field);
        } catch (const std::exception&) {
            throw UnsupportedFormat(path + ":" + std::to_string(lineno) + ": non-numeric field");
        }
        if (id_val != v.tokens_.size()) {
            throw UnsupportedFormat(path + ":" + std::to_string(lineno) + ": ids must be dense from 0");
        }
        v.insert(token, freq_val);
    }
    if (v.tokens_.size() < 2 || v.tokens_[0] != "<unk>" || v.tokens_[1] != "<pad>") {
        throw UnsupportedFormat(path + ": missing reserved <unk>/<pad> entries");
    }
    return v;
}

}  // namespace sentord

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace sentord {

/// Token/id bimap. Ids are dense: UNK=0, PAD=1, then corpus tokens ordered by
/// descending frequency with lexicographic tie-break.
class Vocabulary {
public:
    static constexpr int kUnk = 0;
    static constexpr int kPad = 1;

    Vocabulary();

    /// min_freq filters rare tokens; they encode to UNK.
    static Vocabulary from_counts(const std::map<std::string, std::uint64_t>& counts,
                                  std::size_t min_freq);

    int id(const std::string& token) const;
    const std::string& token(int id) const;
    std::uint64_t freq(int id) const;
    std::size_t size() const { return tokens_.size(); }

    std::vector<int> encode(const std::vector<std::string>& tokens) const;
    std::vector<std::string> decode(const std::vector<int>& ids) const;

    /// One line per id: "<id>\t<token>\t<freq>".
    void save(const std::string& path) const;
    static Vocabulary load(const std::string& path);

private:
    void insert(std::string token, std::uint64_t f);

    std::vector<std::string> tokens_;
    std::vector<std::uint64_t> freqs_;
    std::unordered_map<std::string, int> index_;
};

}  // namespace sentord

#include <cstdio>
#include <fstream>
#include <map>

#include "doctest.h"
#include "sentord/errors.hpp"
#include "sentord/vocab.hpp"

using namespace sentord;

namespace {

std::map<std::string, std::uint64_t> sample_counts() {
    return {{"alpha", 5}, {"beta", 5}, {"gamma", 2}, {"rare", 1}};
}

}  // namespace

TEST_CASE("reserved ids come first") {
    Vocabulary v;
    CHECK(v.size() == 2);
    CHECK(v.token(Vocabulary::kUnk) == "<unk>");
    CHECK(v.token(Vocabulary::kPad) == "<pad>");
}

TEST_CASE("frequency cutoff and ordering") {
    const auto v = Vocabulary::from_counts(sample_counts(), 2);
    CHECK(v.size() == 5);  // 2 reserved + alpha, beta, gamma
    // descending frequency, lexicographic tie-break
    CHECK(v.token(2) == "alpha");
    CHECK(v.token(3) == "beta");
    CHECK(v.token(4) == "gamma");
    CHECK(v.id("rare") == Vocabulary::kUnk);
    CHECK(v.id("never-seen") == Vocabulary::kUnk);
    CHECK(v.freq(2) == 5);
}

TEST_CASE("encode and decode round-trip through ids") {
    const auto v = Vocabulary::from_counts(sample_counts(), 1);
    const auto ids = v.encode({"beta", "rare", "nope"});
    CHECK(ids.size() == 3);
    CHECK(ids[1] != Vocabulary::kUnk);  // rare kept at min_freq 1
    CHECK(ids[2] == Vocabulary::kUnk);
    const auto back = v.decode(ids);
    CHECK(back[0] == "beta");
    CHECK(back[2] == "<unk>");
}

TEST_CASE("save and load preserve everything") {
    const auto v = Vocabulary::from_counts(sample_counts(), 2);
    const std::string path = "vocab_roundtrip.tsv";
    v.save(path);
    const auto w = Vocabulary::load(path);
    REQUIRE(w.size() == v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(w.token(int(i)) == v.token(int(i)));
        CHECK(w.freq(int(i)) == v.freq(int(i)));
    }
    std::remove(path.c_str());
}

TEST_CASE("malformed vocabulary files are rejected") {
    const std::string path = "vocab_bad.tsv";
    {
        std::ofstream out(path);
        out << "0\t<unk>\t0\nnot a line\n";
    }
    CHECK_THROWS_AS(Vocabulary::load(path), UnsupportedFormat);
    {
        std::ofstream out(path);
        out << "0\twrong\t0\n1\t<pad>\t0\n";  // id 0 must be <unk>
    }
    CHECK_THROWS_AS(Vocabulary::load(path), UnsupportedFormat);
    std::remove(path.c_str());
    CHECK_THROWS_AS(Vocabulary::load("does_not_exist.tsv"), DataError);
}

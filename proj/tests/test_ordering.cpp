#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "sentord/errors.hpp"
#include "sentord/ordering.hpp"

using namespace sentord;

namespace {

PairMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
    PairMatrix pm(n);
    std::uniform_real_distribution<double> dist(0.05, 0.95);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) pm.at(i, j) = dist(rng);
    return pm;
}

PairMatrix uniform_matrix(std::size_t n, double p = 0.5) {
    PairMatrix pm(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) pm.at(i, j) = p;
    return pm;
}

ModelBundle small_model(std::size_t vocab, std::uint64_t seed) {
    ModelConfig cfg;
    cfg.vocab_size = vocab;
    cfg.dim = 3;
    cfg.hidden = 4;
    cfg.seed = seed;
    return ModelBundle(cfg);
}

Document doc_from_ids(std::string id, const std::vector<std::vector<int>>& sent_ids,
                      std::vector<int> gold = {}) {
    Document d;
    d.id = std::move(id);
    d.gold = std::move(gold);
    for (const auto& ids : sent_ids) {
        Sentence s;
        s.ids = ids;
        d.sentences.push_back(std::move(s));
    }
    return d;
}

}  // namespace

TEST_CASE("single sentence decodes to itself") {
    PairMatrix pm(1);
    CHECK(beam_search_decode(pm, 4) == std::vector<int>{0});
    CHECK(brute_force_decode(pm) == std::vector<int>{0});
}

TEST_CASE("two sentences follow the stronger direction") {
    PairMatrix pm(2);
    pm.at(0, 1) = 0.9;
    pm.at(1, 0) = 0.2;
    CHECK(beam_search_decode(pm, 2) == std::vector<int>{0, 1});
    pm.at(0, 1) = 0.2;
    pm.at(1, 0) = 0.9;
    CHECK(beam_search_decode(pm, 2) == std::vector<int>{1, 0});
}

TEST_CASE("ties resolve to the lexicographically first order") {
    const PairMatrix pm = uniform_matrix(4);
    const std::vector<int> identity = {0, 1, 2, 3};
    CHECK(beam_search_decode(pm, 16) == identity);
    CHECK(brute_force_decode(pm) == identity);
}

TEST_CASE("a wide beam matches exhaustive search") {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 2 + rep % 4;
        const PairMatrix pm = random_matrix(n, rng);
        CHECK(beam_search_decode(pm, 128) == brute_force_decode(pm));
    }
}

TEST_CASE("wider beams never score worse") {
    std::mt19937_64 rng(303);
    for (int rep = 0; rep < 10; ++rep) {
        const PairMatrix pm = random_matrix(7, rng);
        const double s1 = total_score(pm, beam_search_decode(pm, 1));
        const double s4 = total_score(pm, beam_search_decode(pm, 4));
        const double s128 = total_score(pm, beam_search_decode(pm, 128));
        CHECK(s1 <= s4 + 1e-12);
        CHECK(s4 <= s128 + 1e-12);
    }
}

TEST_CASE("the reported award equals the order's total score") {
    std::mt19937_64 rng(55);
    for (int rep = 0; rep < 10; ++rep) {
        const PairMatrix pm = random_matrix(5, rng);
        const DecodedOrder d = beam_search_decode_scored(pm, 8);
        CHECK(d.award == doctest::Approx(total_score(pm, d.order)).epsilon(1e-9));
    }
}

TEST_CASE("decode input validation") {
    const PairMatrix pm = uniform_matrix(3);
    CHECK_THROWS_AS(beam_search_decode(pm, 0), InvalidBeam);
    CHECK_THROWS_AS(beam_search_decode(PairMatrix(0), 4), EmptyText);
    CHECK_THROWS_AS(brute_force_decode(PairMatrix(9)), TooLarge);
}

TEST_CASE("prediction shuffles presentation-order documents") {
    auto m = small_model(10, 13);
    std::vector<Document> docs = {
        doc_from_ids("p0", {{2}, {3}, {4}, {5}, {6}, {7}, {8}})};
    PredictOptions opts;
    opts.beam_size = 8;
    opts.shuffle_seed = 99;
    const auto a = predict_corpus(docs, m, opts);
    const auto b = predict_corpus(docs, m, opts);
    REQUIRE(a.size() == 1);
    CHECK(a[0].id == "p0");
    CHECK(is_permutation_0n(a[0].gold_order, 7));
    CHECK(is_permutation_0n(a[0].predicted_order, 7));
    CHECK(a[0].gold_order == b[0].gold_order);
    CHECK(a[0].predicted_order == b[0].predicted_order);

    opts.shuffle_seed = 100;
    const auto c = predict_corpus(docs, m, opts);
    CHECK(a[0].gold_order != c[0].gold_order);
}

TEST_CASE("documents with explicit gold are used as presented") {
    auto m = small_model(10, 13);
    std::vector<Document> docs = {
        doc_from_ids("g0", {{2}, {3}, {4}}, {2, 0, 1})};
    PredictOptions opts;
    opts.beam_size = 8;
    opts.shuffle_seed = 99;
    const auto recs = predict_corpus(docs, m, opts);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].gold_order == std::vector<int>{2, 0, 1});

    const PairMatrix pm = build_pair_matrix(m, docs[0]);
    CHECK(recs[0].predicted_order == beam_search_decode(pm, 8));
    CHECK(recs[0].score == doctest::Approx(total_score(pm, recs[0].predicted_order)).epsilon(1e-12));
}

TEST_CASE("threaded prediction matches the single-threaded result") {
    auto m = small_model(12, 29);
    std::vector<Document> docs;
    for (int i = 0; i < 9; ++i) {
        std::vector<std::vector<int>> sents;
        for (int s = 0; s < 3 + i % 3; ++s)
            sents.push_back({2 + (i + s) % 10, 2 + (i * 3 + s) % 10});
        docs.push_back(doc_from_ids("m" + std::to_string(i), sents));
    }
    PredictOptions one;
    one.beam_size = 16;
    one.shuffle_seed = 7;
    one.threads = 1;
    PredictOptions four = one;
    four.threads = 4;
    const auto a = predict_corpus(docs, m, one);
    const auto b = predict_corpus(docs, m, four);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].id == docs[i].id);
        CHECK(a[i].gold_order == b[i].gold_order);
        CHECK(a[i].predicted_order == b[i].predicted_order);
        CHECK(a[i].score == b[i].score);
    }
}

TEST_CASE("shuffled gold order inverts the applied permutation") {
    auto m = small_model(10, 13);
    std::vector<Document> docs = {doc_from_ids("inv", {{2}, {3}, {4}, {5}})};
    PredictOptions opts;
    opts.beam_size = 8;
    opts.shuffle_seed = 5;
    const auto recs = predict_corpus(docs, m, opts);
    const auto& gold = recs[0].gold_order;
    // gold_order[k] is the reading rank of presented sentence k; ranks cover 0..n-1
    std::vector<int> seen(4, 0);
    for (int r : gold) {
        REQUIRE(r >= 0);
        REQUIRE(r < 4);
        seen[static_cast<std::size_t>(r)] += 1;
    }
    CHECK(seen == std::vector<int>(4, 1));
}

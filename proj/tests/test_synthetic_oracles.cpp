#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "sentord/errors.hpp"
#include "sentord/metrics.hpp"
#include "sentord/oracles.hpp"
#include "sentord/synthetic.hpp"

using namespace sentord;

TEST_CASE("ordinal corpus is deterministic and well formed") {
    const auto a = make_ordinal_corpus(40, 7);
    const auto b = make_ordinal_corpus(40, 7);
    REQUIRE(a.size() == 40);
    for (std::size_t t = 0; t < a.size(); ++t) {
        CHECK(a[t].id == "ord-" + std::to_string(t));
        CHECK(a[t].id == b[t].id);
        CHECK(a[t].abstract == b[t].abstract);
        CHECK(a[t].category == b[t].category);
        CHECK(a[t].abstract.rfind("First,", 0) == 0);
        CHECK(!a[t].category.empty());
    }
    const auto c = make_ordinal_corpus(40, 8);
    bool any_diff = false;
    for (std::size_t t = 0; t < a.size(); ++t)
        any_diff = any_diff || a[t].abstract != c[t].abstract;
    CHECK(any_diff);

    std::set<std::string> cats;
    for (const auto& r : a) cats.insert(r.category);
    CHECK(cats.size() == 7);
}

TEST_CASE("ordinal documents split into three to six sentences") {
    const auto docs = make_ordinal_documents(60, 21);
    REQUIRE(docs.size() == 60);
    for (const auto& d : docs) {
        CHECK(d.size() >= 3);
        CHECK(d.size() <= 6);
        CHECK(d.gold.empty());
        REQUIRE(!d.sentences.empty());
        CHECK(d.sentences[0].tokens[0] == "first");  // tokens are lowercased
    }
}

TEST_CASE("marker list covers the six ordinals in order") {
    REQUIRE(kOrdinalMarkers.size() == 6);
    CHECK(kOrdinalMarkers[0] == "first");
    CHECK(kOrdinalMarkers[1] == "second");
    CHECK(kOrdinalMarkers[5] == "sixth");
}

TEST_CASE("baseline lengths follow the pinned distribution") {
    const auto lengths = baseline_length_sample(10000);
    REQUIRE(lengths.size() == 10000);
    std::map<std::size_t, std::size_t> counts;
    for (std::size_t n : lengths) counts[n] += 1;
    CHECK(counts[2] == 1100);
    CHECK(counts[3] == 1200);
    CHECK(counts[4] == 1500);
    CHECK(counts[5] == 1600);
    CHECK(counts[6] == 1500);
    CHECK(counts[7] == 1200);
    CHECK(counts[8] == 900);
    CHECK(counts[9] == 600);
    CHECK(counts[10] == 400);
    const double mean =
        std::accumulate(lengths.begin(), lengths.end(), 0.0) / 10000.0;
    CHECK(mean == doctest::Approx(5.38).epsilon(1e-12));
}

TEST_CASE("fractions reduce and normalize their sign") {
    CHECK(Fraction(2, 4) == Fraction(1, 2));
    CHECK(Fraction(-2, 4) == Fraction(-1, 2));
    CHECK(Fraction(1, -2) == Fraction(-1, 2));
    CHECK(Fraction(0, 5) == Fraction(0, 7));
    CHECK(Fraction(3, 6).to_double() == 0.5);
}

TEST_CASE("rational metrics match hand-computed fractions") {
    const RationalMetrics m = rational_metrics({2, 0, 3, 1}, {0, 1, 2, 3});
    CHECK(m.rouge_s == Fraction(1, 2));
    CHECK(m.rouge_2 == Fraction(0, 1));
    CHECK(m.rouge_3 == Fraction(0, 1));
    CHECK(m.p_all == Fraction(0, 1));

    const RationalMetrics id4 = rational_metrics({0, 1, 2, 3}, {0, 1, 2, 3});
    CHECK(id4.rouge_s == Fraction(1, 1));
    CHECK(id4.rouge_2 == Fraction(1, 1));
    CHECK(id4.rouge_3 == Fraction(1, 1));
    CHECK(id4.p_all == Fraction(1, 1));

    CHECK_THROWS_AS(rational_metrics({0}, {0}), InvalidOrder);
    CHECK_THROWS_AS(rational_metrics({0, 1}, {0, 2}), InvalidOrder);
}

TEST_CASE("rational and float metrics agree exactly on a spot check") {
    const std::vector<int> gold = {1, 3, 0, 2};
    const std::vector<int> pred = {3, 1, 2, 0};
    const RationalMetrics r = rational_metrics(gold, pred);
    CHECK(r.rouge_s.to_double() == rouge_s_text(gold, pred));
    CHECK(r.rouge_2.to_double() == rouge_n_text(gold, pred, 2));
    CHECK(r.rouge_3.to_double() == rouge_n_text(gold, pred, 3));
}

TEST_CASE("gradient oracle stays within tolerance") {
    for (EncoderKind kind : {EncoderKind::cbow, EncoderKind::cnn, EncoderKind::lstm}) {
        const GradCheckResult r = gradient_check(kind, 6);
        CHECK(r.max_rel_err <= 1e-4);
        CHECK(r.params_checked > 100);
        CHECK(!r.worst.empty());
    }
}

TEST_CASE("decode oracle accepts the beam search") {
    const DecodeCheckResult r = decode_check(12, 4, 99);
    CHECK(r.exact_cases == 12);
    CHECK(r.bounded_cases == 4);
    CHECK(r.failures.empty());
}

TEST_CASE("the full oracle suite passes") {
    const auto failures = run_oracle_suite(1);
    for (const auto& f : failures) MESSAGE(f);
    CHECK(failures.empty());
}

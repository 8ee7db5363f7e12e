#include "sentord/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <utility>

#include "sentord/errors.hpp"
#include "sentord/metrics.hpp"
#include "sentord/ordering.hpp"
#include "sentord/ranker.hpp"

namespace sentord {

Fraction::Fraction(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw NumericError("fraction with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

double Fraction::to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
}

namespace {

std::set<std::pair<int, int>> skip_pairs(const std::vector<int>& arr) {
    std::set<std::pair<int, int>> out;
    for (std::size_t u = 0; u < arr.size(); ++u)
        for (std::size_t v = u + 1; v < arr.size(); ++v) out.emplace(arr[u], arr[v]);
    return out;
}

std::set<std::vector<int>> runs_of(const std::vector<int>& arr, std::size_t N) {
    std::set<std::vector<int>> out;
    if (arr.size() < N) return out;
    for (std::size_t s = 0; s + N <= arr.size(); ++s)
        out.insert(std::vector<int>(arr.begin() + static_cast<long>(s),
                                    arr.begin() + static_cast<long>(s + N)));
    return out;
}

template <typename Set>
long long shared_count(const Set& a, const Set& b) {
    long long shared = 0;
    for (const auto& item : a)
        if (b.count(item)) ++shared;
    return shared;
}

Fraction rational_rouge_n(const std::vector<int>& gold, const std::vector<int>& predicted,
                          std::size_t N) {
    if (gold.size() < N) return Fraction(0, 1);
    const auto a = runs_of(gold, N);
    const auto b = runs_of(predicted, N);
    return Fraction(shared_count(a, b),
                    static_cast<long long>(gold.size() - N + 1));
}

}  // namespace

RationalMetrics rational_metrics(const std::vector<int>& gold,
                                 const std::vector<int>& predicted) {
    if (gold.size() != predicted.size()) throw InvalidOrder("length mismatch");
    const std::size_t n = gold.size();
    if (n < 2) throw InvalidOrder("Rouge-S needs at least 2 sentences");
    if (!is_permutation_0n(gold, n) || !is_permutation_0n(predicted, n)) {
        throw InvalidOrder("orders must both be permutations of 0..n-1");
    }
    RationalMetrics rm;
    const long long pairs = static_cast<long long>(n) * static_cast<long long>(n - 1) / 2;
    rm.rouge_s = Fraction(shared_count(skip_pairs(gold), skip_pairs(predicted)), pairs);
    rm.rouge_2 = rational_rouge_n(gold, predicted, 2);
    rm.rouge_3 = rational_rouge_n(gold, predicted, 3);
    rm.p_all = Fraction(gold == predicted ? 1 : 0, 1);
    return rm;
}

namespace {

std::vector<Document> toy_documents(std::size_t vocab_size, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x6f72616364636bULL);
    std::uniform_int_distribution<int> id_dist(0, static_cast<int>(vocab_size) - 1);
    std::uniform_int_distribution<std::size_t> len_dist(2, 4);
    std::vector<Document> docs(2);
    for (std::size_t d = 0; d < docs.size(); ++d) {
        docs[d].id = "toy-" + std::to_string(d);
        docs[d].sentences.resize(3);
        for (auto& sent : docs[d].sentences) {
            sent.ids.resize(len_dist(rng));
            for (auto& id : sent.ids) id = id_dist(rng);
        }
    }
    return docs;
}

std::string element_name(const Parameter& p, std::size_t k) {
    return p.name + "[" + std::to_string(k) + "]";
}

}  // namespace

GradCheckResult gradient_check(EncoderKind kind, std::uint64_t seed) {
    ModelConfig cfg;
    cfg.encoder = kind;
    cfg.vocab_size = 12;
    cfg.dim = 8;
    cfg.hidden = 5;
    cfg.filter_len = 3;
    cfg.seed = seed;
    ModelBundle m(cfg);

    // Generic test point: magnitude-floored random values everywhere (biases
    // and the padding row included), and an L2 weight large enough that no
    // element's gradient sits below finite-difference resolution.
    std::mt19937_64 rng(seed ^ 0x67726164636b32ULL);
    std::uniform_real_distribution<double> mag(0.05, 0.25);
    std::bernoulli_distribution flip(0.5);
    for (Parameter* p : m.params())
        for (std::size_t k = 0; k < p->value.numel(); ++k)
            p->value[k] = flip(rng) ? mag(rng) : -mag(rng);

    const auto docs = toy_documents(cfg.vocab_size, seed);
    const auto batch = extract_pair_examples(docs);
    const double lambda = 5e-3;
    const double step = 1e-5;

    m.zero_grads();
    batch_loss(m, docs, batch, lambda, true);
    std::vector<Tensor> analytic;
    for (const Parameter* p : std::as_const(m).params()) analytic.push_back(p->grad);

    GradCheckResult res;
    auto params = m.params();
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        Parameter& p = *params[pi];
        for (std::size_t k = 0; k < p.value.numel(); ++k) {
            const double saved = p.value[k];
            p.value[k] = saved + step;
            const double up = batch_loss(m, docs, batch, lambda, false);
            p.value[k] = saved - step;
            const double down = batch_loss(m, docs, batch, lambda, false);
            p.value[k] = saved;
            const double fd = (up - down) / (2.0 * step);
            const double ga = analytic[pi][k];
            const double rel = std::abs(ga - fd) / (std::abs(ga) + std::abs(fd) + 1e-12);
            ++res.params_checked;
            if (rel > res.max_rel_err) {
                res.max_rel_err = rel;
                res.worst = element_name(p, k);
            }
        }
    }
    m.zero_grads();
    return res;
}

DecodeCheckResult decode_check(std::size_t exact_cases, std::size_t bounded_cases,
                               std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x6465636f6465ULL);
    std::uniform_real_distribution<double> p_dist(0.02, 0.98);
    DecodeCheckResult res;

    auto random_matrix = [&](std::size_t n) {
        PairMatrix pm(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) pm.at(i, j) = p_dist(rng);
        return pm;
    };
    auto describe = [](const char* what, std::size_t n, std::size_t c) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%s (n=%zu, case %zu)", what, n, c);
        return std::string(buf);
    };

    for (std::size_t c = 0; c < exact_cases; ++c) {
        const std::size_t n = 2 + c % 4;
        const PairMatrix pm = random_matrix(n);
        const auto beam = beam_search_decode(pm, 128);
        const auto brute = brute_force_decode(pm);
        if (beam != brute) {
            res.failures.push_back(describe("beam differs from brute force", n, c));
            continue;
        }
        ++res.exact_cases;
    }

    for (std::size_t c = 0; c < bounded_cases; ++c) {
        const std::size_t n = 6 + c % 2;
        const PairMatrix pm = random_matrix(n);
        const double greedy = total_score(pm, beam_search_decode(pm, 1));
        const double beam = total_score(pm, beam_search_decode(pm, 128));
        const double brute = total_score(pm, brute_force_decode(pm));
        if (beam < greedy) {
            res.failures.push_back(describe("beam below greedy", n, c));
            continue;
        }
        if (beam > brute) {
            res.failures.push_back(describe("beam above brute force", n, c));
            continue;
        }
        ++res.bounded_cases;
    }
    return res;
}

std::vector<std::string> run_oracle_suite(std::uint64_t seed) {
    std::vector<std::string> failures;

    {
        // Float metrics against the rational enumeration, all orderings of 4.
        const std::vector<int> gold = {0, 1, 2, 3};
        std::vector<int> perm = gold;
        do {
            const auto rm = rational_metrics(gold, perm);
            if (rouge_s_text(gold, perm) != rm.rouge_s.to_double())
                failures.push_back("Rouge-S mismatch on a 4-sentence ordering");
            if (rouge_n_text(gold, perm, 2) != rm.rouge_2.to_double())
                failures.push_back("Rouge-2 mismatch on a 4-sentence ordering");
            if (rouge_n_text(gold, perm, 3) != rm.rouge_3.to_double())
                failures.push_back("Rouge-3 mismatch on a 4-sentence ordering");
        } while (std::next_permutation(perm.begin(), perm.end()));

        const std::vector<int> g2 = {0, 1};
        if (rouge_s_text(g2, {1, 0}) != 0.0 || rouge_s_text(g2, {0, 1}) != 1.0)
            failures.push_back("Rouge-S wrong on a 2-sentence text");
        if (rouge_n_text(g2, {0, 1}, 3) != 0.0)
            failures.push_back("Rouge-3 must be 0 when the text is shorter than 3");
        if (expected_rouge_n_enumerated(3, 2) != 1.0 / 3.0)
            failures.push_back("expected Rouge-2 for 3 sentences must be exactly 1/3");
    }

    for (EncoderKind kind : {EncoderKind::cbow, EncoderKind::cnn, EncoderKind::lstm}) {
        const auto gc = gradient_check(kind, seed);
        if (gc.max_rel_err > 1e-4) {
            failures.push_back("gradient check failed for " + encoder_name(kind) + " at " +
                               gc.worst + " (rel err " + std::to_string(gc.max_rel_err) + ")");
        }
    }

    {
        const auto dc = decode_check(40, 10, seed);
        failures.insert(failures.end(), dc.failures.begin(), dc.failures.end());
    }
    return failures;
}

}  // namespace sentord

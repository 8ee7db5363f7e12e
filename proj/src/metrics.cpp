#include "sentord/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>

#include "json.hpp"
#include "sentord/errors.hpp"

using nlohmann::json;

namespace sentord {

namespace {

void require_pair(const std::vector<int>& gold, const std::vector<int>& predicted) {
    const std::size_t n = gold.size();
    if (!is_permutation_0n(gold, n) || !is_permutation_0n(predicted, n)) {
        throw InvalidOrder("gold/predicted orders must be permutations of the same length");
    }
}

std::vector<int> positions_of(const std::vector<int>& order) {
    std::vector<int> pos(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) pos[static_cast<std::size_t>(order[k])] = static_cast<int>(k);
    return pos;
}

}  // namespace

double rouge_s_text(const std::vector<int>& gold, const std::vector<int>& predicted) {
    require_pair(gold, predicted);
    const std::size_t n = gold.size();
    if (n < 2) throw InvalidOrder("Rouge-S needs at least 2 sentences");
    const std::vector<int> pos = positions_of(predicted);
    std::size_t shared = 0;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) {
            if (pos[static_cast<std::size_t>(gold[u])] < pos[static_cast<std::size_t>(gold[v])]) ++shared;
        }
    const std::size_t denom = n * (n - 1) / 2;
    return static_cast<double>(shared) / static_cast<double>(denom);
}

double rouge_n_text(const std::vector<int>& gold, const std::vector<int>& predicted,
                    std::size_t N) {
    require_pair(gold, predicted);
    if (N < 2) throw InvalidOrder("Rouge-N needs N >= 2");
    const std::size_t n = gold.size();
    if (n < N) return 0.0;
    const std::size_t runs = n - N + 1;
    std::size_t shared = 0;
    for (std::size_t g = 0; g < runs; ++g) {
        for (std::size_t p = 0; p < runs; ++p) {
            bool match = true;
            for (std::size_t k = 0; k < N; ++k) {
                if (gold[g + k] != predicted[p + k]) {
                    match = false;
                    break;
                }
            }
            if (match) {
                ++shared;
                break;
            }
        }
    }
    return static_cast<double>(shared) / static_cast<double>(runs);
}

namespace {

struct Accumulator {
    double rouge_s_sum = 0.0;
    std::size_t rouge_s_count = 0;
    double rouge_2_sum = 0.0;
    double rouge_3_sum = 0.0;
    std::size_t exact = 0;
    std::size_t begin_hits = 0;
    std::size_t end_hits = 0;
    std::size_t position_hits = 0;
    std::size_t positions = 0;
    std::size_t texts = 0;

    void add(const std::vector<int>& gold, const std::vector<int>& predicted) {
        const std::size_t n = gold.size();
        ++texts;
        if (n >= 2) {
            rouge_s_sum += rouge_s_text(gold, predicted);
            ++rouge_s_count;
        }
        rouge_2_sum += rouge_n_text(gold, predicted, 2);
        rouge_3_sum += rouge_n_text(gold, predicted, 3);
        if (gold == predicted) ++exact;
        if (gold.front() == predicted.front()) ++begin_hits;
        if (gold.back() == predicted.back()) ++end_hits;
        for (std::size_t t = 0; t < n; ++t)
            if (gold[t] == predicted[t]) ++position_hits;
        positions += n;
    }

    MetricValues values() const {
        MetricValues v;
        v.texts = texts;
        if (texts == 0) return v;
        const auto m = static_cast<double>(texts);
        v.rouge_s = rouge_s_count == 0 ? 0.0 : rouge_s_sum / static_cast<double>(rouge_s_count);
        v.rouge_2 = rouge_2_sum / m;
        v.rouge_3 = rouge_3_sum / m;
        v.p_all = static_cast<double>(exact) / m;
        v.p_begin = static_cast<double>(begin_hits) / m;
        v.p_end = static_cast<double>(end_hits) / m;
        v.p_mean = positions == 0 ? 0.0
                                  : static_cast<double>(position_hits) / static_cast<double>(positions);
        return v;
    }
};

}  // namespace

MetricReport compute_report(const std::vector<PredictionRecord>& records,
                            const std::map<std::string, std::string>* id_to_category) {
    MetricReport report;
    Accumulator overall;
    std::map<std::size_t, Accumulator> by_length;
    std::map<std::string, Accumulator> by_category;
    for (const auto& r : records) {
        require_pair(r.gold_order, r.predicted_order);
        if (r.gold_order.size() < 2) ++report.rouge_s_skipped;
        overall.add(r.gold_order, r.predicted_order);
        by_length[r.gold_order.size()].add(r.gold_order, r.predicted_order);
        std::string cat = "unknown";
        if (id_to_category) {
            auto it = id_to_category->find(r.id);
            if (it != id_to_category->end()) cat = it->second;
        }
        by_category[cat].add(r.gold_order, r.predicted_order);
    }
    if (report.rouge_s_skipped > 0) {
        std::cerr << "warning: " << report.rouge_s_skipped
                  << " single-sentence text(s) excluded from Rouge-S\n";
    }
    report.overall = overall.values();
    for (const auto& [n, acc] : by_length) report.per_length[n] = acc.values();
    for (const auto& [cat, acc] : by_category) report.per_category[cat] = acc.values();
    return report;
}

double expected_rouge_n_enumerated(std::size_t n, std::size_t N) {
    if (n > 8) throw TooLarge("enumeration capped at 8 sentences");
    if (n == 0) throw InvalidOrder("empty text");
    if (n < N) return 0.0;
    std::vector<int> gold(n);
    std::iota(gold.begin(), gold.end(), 0);
    std::vector<int> perm = gold;
    double sum = rouge_n_text(gold, perm, N);
    std::uint64_t count = 1;
    while (std::next_permutation(perm.begin(), perm.end())) {
        sum += rouge_n_text(gold, perm, N);
        ++count;
    }
    return sum / static_cast<double>(count);
}

RandomBaseline random_baseline(const std::vector<std::size_t>& lengths, std::size_t trials,
                               std::uint64_t seed) {
    if (lengths.empty()) throw EmptyCorpus();
    if (trials < 1) throw DataError("trials must be at least 1");
    RandomBaseline rb;
    rb.trials = trials;

    std::mt19937_64 rng(seed);
    Accumulator acc;
    std::map<std::size_t, Accumulator> by_length;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        for (std::size_t n : lengths) {
            std::vector<int> gold(n);
            std::iota(gold.begin(), gold.end(), 0);
            std::vector<int> pred = gold;
            std::shuffle(pred.begin(), pred.end(), rng);
            acc.add(gold, pred);
            by_length[n].add(gold, pred);
        }
    }
    rb.mc = acc.values();

    double p_all_sum = 0.0, p_begin_sum = 0.0;
    double var_p_all = 0.0, var_p_begin = 0.0, var_rouge_s = 0.0;
    double r2_sum = 0.0, r3_sum = 0.0;
    std::map<std::size_t, double> er2, er3;
    for (std::size_t n : lengths) {
        double fact = 1.0;
        for (std::size_t k = 2; k <= n; ++k) fact *= static_cast<double>(k);
        const double pa = 1.0 / fact;
        const double pb = 1.0 / static_cast<double>(n);
        p_all_sum += pa;
        p_begin_sum += pb;
        var_p_all += pa * (1.0 - pa);
        var_p_begin += pb * (1.0 - pb);
        if (n >= 2) var_rouge_s += 1.0;  // per-text variance of Rouge-S is <= 1/4; use 1/4 below
        if (er2.find(n) == er2.end()) {
            if (n <= 8) {
                er2[n] = expected_rouge_n_enumerated(n, 2);
                er3[n] = expected_rouge_n_enumerated(n, 3);
            } else {
                er2[n] = by_length[n].values().rouge_2;
                er3[n] = by_length[n].values().rouge_3;
            }
        }
        r2_sum += er2[n];
        r3_sum += er3[n];
    }
    const auto m = static_cast<double>(lengths.size());
    const auto samples = m * static_cast<double>(trials);
    rb.analytic_rouge_s = 0.5;
    rb.analytic_p_all = p_all_sum / m;
    rb.analytic_p_begin = p_begin_sum / m;
    rb.analytic_rouge_2 = r2_sum / m;
    rb.analytic_rouge_3 = r3_sum / m;
    rb.sigma_p_all = std::sqrt(var_p_all / static_cast<double>(trials)) / m;
    rb.sigma_p_begin = std::sqrt(var_p_begin / static_cast<double>(trials)) / m;
    rb.sigma_rouge_s = std::sqrt(0.25 * var_rouge_s / static_cast<double>(trials)) / m;
    return rb;
}

namespace {

json values_to_json(const MetricValues& v) {
    return json{{"rouge_s", v.rouge_s}, {"rouge_2", v.rouge_2}, {"rouge_3", v.rouge_3},
                {"p_all", v.p_all},     {"p_begin", v.p_begin}, {"p_end", v.p_end},
                {"p_mean", v.p_mean},   {"texts", v.texts}};
}

}  // namespace

void write_report_json(const std::string& path, const MetricReport& report) {
    json out;
    out["overall"] = values_to_json(report.overall);
    json lengths = json::object();
    for (const auto& [n, v] : report.per_length) lengths[std::to_string(n)] = values_to_json(v);
    out["per_length"] = std::move(lengths);
    json cats = json::object();
    for (const auto& [c, v] : report.per_category) cats[c] = values_to_json(v);
    out["per_category"] = std::move(cats);
    out["rouge_s_skipped"] = report.rouge_s_skipped;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path + " for writing");
    f << out.dump(2) << '\n';
    if (!f) throw DataError("failed writing " + path);
}

void write_report_tsv(const std::string& path, const MetricReport& report) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path + " for writing");
    f << "length\ttexts\trouge_s\trouge_2\trouge_3\tp_all\tp_begin\tp_end\tp_mean\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        return std::string(buf);
    };
    for (const auto& [n, v] : report.per_length) {
        f << n << '\t' << v.texts << '\t' << num(v.rouge_s) << '\t' << num(v.rouge_2) << '\t'
          << num(v.rouge_3) << '\t' << num(v.p_all) << '\t' << num(v.p_begin) << '\t'
          << num(v.p_end) << '\t' << num(v.p_mean) << '\n';
    }
    if (!f) throw DataError("failed writing " + path);
}

std::string format_metrics_line(const MetricValues& v) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "Rouge-S %.4f | Rouge-2 %.4f | Rouge-3 %.4f | P-all %.4f | "
                  "P-begin %.4f | P-end %.4f | P-mean %.4f (%zu texts)",
                  v.rouge_s, v.rouge_2, v.rouge_3, v.p_all, v.p_begin, v.p_end, v.p_mean,
                  v.texts);
    return std::string(buf);
}

}  // namespace sentord

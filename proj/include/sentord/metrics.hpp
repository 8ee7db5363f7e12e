#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sentord/corpus.hpp"

namespace sentord {

struct MetricValues {
    double rouge_s = 0.0;
    double rouge_2 = 0.0;
    double rouge_3 = 0.0;
    double p_all = 0.0;
    double p_begin = 0.0;
    double p_end = 0.0;
    double p_mean = 0.0;
    std::size_t texts = 0;
};

struct MetricReport {
    MetricValues overall;
    std::map<std::size_t, MetricValues> per_length;
    std::map<std::string, MetricValues> per_category;
    std::size_t rouge_s_skipped = 0;  // single-sentence texts excluded from Rouge-S
};

/// Fraction of gold skip-bigrams (ordered sentence pairs, any gap) preserved
/// by the prediction. Both orders must have length >= 2.
double rouge_s_text(const std::vector<int>& gold, const std::vector<int>& predicted);

/// Fraction of gold runs of N consecutive sentences preserved; 0 when n < N.
double rouge_n_text(const std::vector<int>& gold, const std::vector<int>& predicted,
                    std::size_t N);

MetricReport compute_report(const std::vector<PredictionRecord>& records,
                            const std::map<std::string, std::string>* id_to_category = nullptr);

struct RandomBaseline {
    MetricValues mc;           // Monte Carlo means over trials x texts
    double analytic_rouge_s = 0.0;   // exactly 0.5 for n >= 2
    double analytic_rouge_2 = 0.0;   // exhaustive enumeration for n <= 8
    double analytic_rouge_3 = 0.0;
    double analytic_p_all = 0.0;     // E[1/n!]
    double analytic_p_begin = 0.0;   // E[1/n]
    double sigma_p_all = 0.0;        // std. error of the MC estimate
    double sigma_p_begin = 0.0;
    double sigma_rouge_s = 0.0;
    std::size_t trials = 0;
};

/// Uniform-random orderings of texts with the given sentence counts.
RandomBaseline random_baseline(const std::vector<std::size_t>& lengths, std::size_t trials,
                               std::uint64_t seed);

/// Expected Rouge-N of a uniform random permutation against gold, by full
/// enumeration of n! orderings (n <= 8).
double expected_rouge_n_enumerated(std::size_t n, std::size_t N);

void write_report_json(const std::string& path, const MetricReport& report);
void write_report_tsv(const std::string& path, const MetricReport& report);
std::string format_metrics_line(const MetricValues& v);

}  // namespace sentord

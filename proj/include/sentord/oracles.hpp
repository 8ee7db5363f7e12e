#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sentord/model.hpp"

namespace sentord {

/// Reduced fraction with a positive denominator.
struct Fraction {
    long long num = 0;
    long long den = 1;

    Fraction() = default;
    Fraction(long long n, long long d);
    double to_double() const;
    bool operator==(const Fraction&) const = default;
};

struct RationalMetrics {
    Fraction rouge_s;
    Fraction rouge_2;
    Fraction rouge_3;
    Fraction p_all;
};

/// Exact reference values for one text, computed by enumerating skip-pair and
/// run sets in integer arithmetic. Kept deliberately separate from the float
/// metric code so the two can cross-check each other.
RationalMetrics rational_metrics(const std::vector<int>& gold,
                                 const std::vector<int>& predicted);

struct GradCheckResult {
    double max_rel_err = 0.0;
    std::size_t params_checked = 0;
    std::string worst;  // "param[index]" with the largest relative error
};

/// Central finite differences (step 1e-5) against the tape gradients of the
/// pairwise training loss, over every element of every parameter of a small
/// random model (d = 8, h = 5).
GradCheckResult gradient_check(EncoderKind kind, std::uint64_t seed);

struct DecodeCheckResult {
    std::size_t exact_cases = 0;    // 2..5 sentences: beam 128 == brute force
    std::size_t bounded_cases = 0;  // 6..7 sentences: greedy <= beam <= brute
    std::vector<std::string> failures;
};

/// Random precedence matrices with entries in (0.02, 0.98).
DecodeCheckResult decode_check(std::size_t exact_cases, std::size_t bounded_cases,
                               std::uint64_t seed);

/// Runs every oracle; returns one description per failed check (empty = ok).
std::vector<std::string> run_oracle_suite(std::uint64_t seed);

}  // namespace sentord

#ifndef KSIL_EVALUATION_HPP
#define KSIL_EVALUATION_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "ksil/core.hpp"

/**
 * @file evaluation.hpp
 * @brief External validation and the paired statistics used to compare clustering algorithms.
 */

namespace ksil {

/**
 * Normalized mutual information with arithmetic-mean normalization and natural logarithms.
 * Two single-cluster labelings score 0. Throws `LengthMismatch` if the lengths differ or are zero.
 */
double nmi(std::span<const Label> a, std::span<const Label> b);

/// Ranks starting at 1, ties receive the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of average ranks. Throws `ConstantSequence` if either input is constant.
double spearman_rho(std::span<const double> a, std::span<const double> b);

enum class Alternative { greater, two_sided };
enum class WilcoxonMethod { automatic, exact, normal };

struct WilcoxonResult {
    double statistic = 0;  ///< W+, the rank sum of the positive differences.
    double p_value = 1;
    std::size_t n_used = 0;
    std::size_t n_zero = 0;  ///< Zero differences dropped before ranking.
    bool exact = false;
};

/**
 * Wilcoxon signed-rank test on paired differences.
 * Zeros are dropped and |d| ranked with average ranks. `automatic` uses the exact null distribution when at most
 * 25 differences remain and none are tied, otherwise the normal approximation with tie and continuity corrections.
 * Throws `TooFewPairs` when fewer than 5 non-zero differences remain.
 */
WilcoxonResult wilcoxon_signed_rank(std::span<const double> diffs, Alternative alternative = Alternative::greater,
                                    WilcoxonMethod method = WilcoxonMethod::automatic);

/// Mean of `100 * (a_i - b_i) / |b_i|`. Throws `ZeroBaseline` if some `b_i == 0`.
double relative_improvement(std::span<const double> a, std::span<const double> b);

/// Quantile of Student's t distribution with `dof` degrees of freedom.
double student_t_quantile(double probability, double dof);

struct ConfidenceInterval {
    double mean = 0;
    double lo = 0;
    double hi = 0;
};

/// `mean ± t_{(1+level)/2, n-1} · s / sqrt(n)`. Throws `TooFewSamples` for fewer than two samples.
ConfidenceInterval t_confidence_interval(std::span<const double> samples, double level = 0.95);

} // namespace ksil

#endif

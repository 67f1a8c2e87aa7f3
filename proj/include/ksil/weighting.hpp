#ifndef KSIL_WEIGHTING_HPP
#define KSIL_WEIGHTING_HPP

#include <span>
#include <vector>

#include "ksil/core.hpp"

namespace ksil {

/// Sensitivity `p` and the stability constant added to shifted scores.
struct SchemeParams {
    double p = 2.0;
    double epsilon = 1e-8;
};

/// Median; the mean of the two middle values for even counts. Input must be non-empty.
double median(std::vector<double> values);

/// Descending dense ranks: the largest value gets rank 1, ties share a rank, ranks are consecutive.
std::vector<int> dense_rank_desc(std::span<const double> scores);

/**
 * Power scheme for one cluster: `((s_i - s_min + eps) / median(s - s_min + eps))^p`.
 * Points at the median score get weight 1.
 */
WeightVector power_weights(std::span<const double> scores, const SchemeParams& params);

/**
 * Exponential scheme for one cluster: `exp(-p * (rank_i - median(rank)) / (rank_max / 2))`
 * with descending dense ranks, where `rank_max` is the rank of the cluster's lowest score.
 */
WeightVector exponential_weights(std::span<const double> scores, const SchemeParams& params);

WeightVector scheme_weights(WeightScheme scheme, std::span<const double> scores, const SchemeParams& params);

/**
 * Applies `scheme` separately inside every cluster.
 * `scores[i]` belongs to point `evaluated[i]`; the result is aligned with `scores`.
 */
std::vector<double> cluster_weights(WeightScheme scheme, std::span<const double> scores, std::span<const std::size_t> evaluated,
                                    std::span<const Label> assignments, std::size_t k, const SchemeParams& params);

} // namespace ksil

#endif

#ifndef KSIL_SILHOUETTE_HPP
#define KSIL_SILHOUETTE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "ksil/core.hpp"
#include "ksil/rng.hpp"

/**
 * @file silhouette.hpp
 * @brief Exact and approximate silhouette scores, their aggregation, and objective-aware sampling.
 *
 * All routines use Euclidean distance. A point whose cluster has a single member scores 0,
 * as does a point with zero intra- and inter-cluster distance.
 */

namespace ksil {

/**
 * Per-cluster sufficient statistics for the refined approximation:
 * member count, mean, and within-cluster sum of squared distances to the mean.
 */
struct ClusterStats {
    std::vector<std::size_t> sizes;
    Matrix centroids;
    std::vector<double> sum_squares;
};

ClusterStats compute_cluster_stats(const Dataset& data, std::span<const Label> assignments, std::size_t k);

/// All indices `0, ..., n - 1`.
std::vector<std::size_t> all_indices(std::size_t n);

/**
 * Exact silhouette of each point in `indices`.
 * `a` is the mean distance to the other members of the point's own cluster, `b` the smallest mean distance to another cluster;
 * both use every point of the data set, not only the evaluated ones.
 * Throws `SingleCluster` if `part.k() < 2` and `EmptyIndexSet` if `indices` is empty.
 */
SilhouetteReport exact_silhouette(const Dataset& data, const Partition& part, std::span<const std::size_t> indices,
                                  double alpha = 0.5);

/**
 * Refined approximation (ApR) built from cluster sizes, means and sums of squares:
 * `a~ = sqrt((|C|·||x − μ||² + SS) / (|C| − 1))` and `b~ = min_h sqrt(||x − μ_h||² + SS_h / |C_h|)`.
 * With a two-member cluster `a~` equals the exact `a`.
 */
SilhouetteReport approx_silhouette_apr(const Dataset& data, const ClusterStats& stats, const Partition& part,
                                       std::span<const std::size_t> indices, double alpha = 0.5);

/**
 * Simplified approximation (ApS): distance to the own centroid against distance to the nearest other centroid.
 * Uses `part.centroids`. Only meant as a comparison baseline.
 */
SilhouetteReport approx_silhouette_aps(const Dataset& data, const Partition& part, std::span<const std::size_t> indices,
                                       double alpha = 0.5);

/// Dispatches to one of the three routines above; ApR statistics are computed from `part.assignments`.
SilhouetteReport silhouette(const Dataset& data, const Partition& part, std::span<const std::size_t> indices,
                            SilhouetteMode mode, double alpha = 0.5);

struct Aggregates {
    double micro = 0;
    double macro = 0;
    double combined = 0;
};

/**
 * Micro average (mean over evaluated points), macro average (mean of per-cluster means, over clusters
 * with at least one evaluated point), and `alpha * micro + (1 - alpha) * macro`.
 * `per_point[i]` is the score of point `evaluated[i]`.
 */
Aggregates aggregate(std::span<const double> per_point, std::span<const Label> assignments, std::size_t k,
                     std::span<const std::size_t> evaluated, double alpha);

/**
 * Draws `m` distinct point indices (sorted ascending).
 *
 * For the micro objective this is a uniform sample without replacement; if a cluster ends up unrepresented,
 * one of its members replaces a draw from the most-sampled cluster. For macro and combined objectives each
 * cluster contributes `floor(m / k)` points (or all of its members if fewer), and any remainder is handed out
 * one at a time in cluster-index order to clusters that still have unsampled members.
 * Throws `SampleTooSmall` if `m < k`.
 */
std::vector<std::size_t> sample_indices(const Partition& part, std::size_t m, const Objective& objective, Rng& rng);

} // namespace ksil

#endif

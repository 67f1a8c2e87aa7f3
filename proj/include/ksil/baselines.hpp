#ifndef KSIL_BASELINES_HPP
#define KSIL_BASELINES_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ksil/core.hpp"
#include "ksil/engine.hpp"

/**
 * @file baselines.hpp
 * @brief Comparison algorithms: plain k-means and statically weighted k-means driven by
 * neighbourhood density or local outlier factors. All share the K-Sil loop machinery.
 */

namespace ksil {

struct NeighborhoodParams {
    std::size_t h = 10;
    double epsilon = 1e-8;
};

/// Configuration shared by the Lloyd-style baselines.
struct LloydConfig {
    std::size_t k = 2;
    InitMethod init = InitMethod::kmeanspp;
    double tau = 1e-4;
    std::size_t max_iter = 100;
    std::uint64_t seed = 0;
    Objective objective = Objective::macro_avg();
    SilhouetteMode mode = SilhouetteMode::exact;
    ReinitStrategy reinit = ReinitStrategy::largest;
    bool record_labels = false;
};

/// Loop settings equivalent to `cfg`; the retention objective is scored with `cfg.mode`.
LoopSettings loop_settings(const LloydConfig& cfg);

/// Lloyd's k-means with the shared init, tie-breaking, repair and termination rules.
RunResult run_kmeans(const Dataset& data, const LloydConfig& cfg);
RunResult run_kmeans(const Dataset& data, const LloydConfig& cfg, const Partition& initial);

/// Lloyd loop whose centroid update uses fixed per-point weights.
RunResult run_weighted_kmeans(const Dataset& data, const LloydConfig& cfg, std::span<const double> weights);
RunResult run_weighted_kmeans(const Dataset& data, const LloydConfig& cfg, std::span<const double> weights, const Partition& initial);

/// Indices of the `h` nearest other points of every point, nearest first (ties by index), plus their distances.
struct NeighborTable {
    std::vector<std::vector<std::size_t>> index;
    std::vector<std::vector<double>> dist;
};

NeighborTable nearest_neighbors(const Dataset& data, std::size_t h);

/// `1 / (mean distance to the h nearest neighbours + eps)`.
WeightVector density_weights(const Dataset& data, const NeighborhoodParams& params);

/// Local outlier factor of every point with `h` neighbours; a reachability mean of zero is guarded by `eps`.
std::vector<double> local_outlier_factors(const Dataset& data, const NeighborhoodParams& params);

/// `1 / max(LOF, 1)`: inliers keep weight 1 and outliers are damped.
WeightVector lof_weights(const Dataset& data, const NeighborhoodParams& params);

enum class NeighborhoodAlgo { density, lof };

const char* to_string(NeighborhoodAlgo algo);

struct NeighborhoodTuneResult {
    std::size_t best_h = 0;
    RunResult run;
    std::vector<std::size_t> candidates;
    std::vector<double> objectives; ///< Exact silhouette objective of each candidate's retained partition.
};

/**
 * Grid search over `h`: weights, a weighted run, and the exact silhouette objective of the retained partition.
 * Returns the best candidate; ties go to the smaller `h`. Candidates with `h >= n` are skipped.
 */
NeighborhoodTuneResult tune_neighborhood(const Dataset& data, const LloydConfig& cfg, NeighborhoodAlgo algo,
                                         std::span<const std::size_t> grid, const Partition& initial);
NeighborhoodTuneResult tune_neighborhood(const Dataset& data, const LloydConfig& cfg, NeighborhoodAlgo algo,
                                         std::span<const std::size_t> grid);

inline std::vector<std::size_t> default_neighbor_grid() { return {3, 5, 10, 15, 20, 30}; }

} // namespace ksil

#endif

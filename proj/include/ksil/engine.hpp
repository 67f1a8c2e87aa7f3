#ifndef KSIL_ENGINE_HPP
#define KSIL_ENGINE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ksil/core.hpp"
#include "ksil/rng.hpp"
#include "ksil/silhouette.hpp"

/**
 * @file engine.hpp
 * @brief Silhouette-weighted k-means refinement and the shared Lloyd-style machinery.
 */

namespace ksil {

/// Stream ids used to derive child generators from a run seed.
namespace streams {
inline constexpr std::uint64_t init = 1;
inline constexpr std::uint64_t sampling = 2;
} // namespace streams

/**
 * One k-means iteration from `k` seed centroids: pick the seeds (distinct points uniformly, or k-means++
 * D² sampling), assign every point to its nearest seed, move each centroid to its cluster mean, and label
 * every point by its nearest mean. Empty clusters are repaired with `reinit_empty()`. Throws `KTooSmall` for `k < 2` and `KTooLarge` for `k > n`.
 */
Partition init_partition(const Dataset& data, std::size_t k, InitMethod method, Rng& rng);

/// Nearest-centroid labels; ties go to the lowest cluster index.
std::vector<Label> assign_labels(const Dataset& data, const Matrix& centroids);

/**
 * Weighted mean of each cluster over the scored points `indices` (with `weights` aligned to `indices`).
 * Points outside `indices` do not contribute. Throws `ZeroClusterWeight` when a cluster's scored weight sums to zero.
 */
Matrix weighted_centroid_update(const Dataset& data, const Partition& part, std::span<const std::size_t> indices,
                                std::span<const double> weights);

/// Same, with one weight per point.
Matrix weighted_centroid_update(const Dataset& data, const Partition& part, std::span<const double> weights);

/**
 * Refills empty clusters one at a time, lowest index first. The donor is the largest cluster (or the one with the
 * highest mean squared deviation from its centroid), ties to the lower index; its member farthest from the donor
 * centroid becomes the empty cluster's centroid and only member. Throws `IrreparablePartition` if no donor has
 * two or more members.
 */
Partition reinit_empty(const Dataset& data, Partition part, ReinitStrategy strategy = ReinitStrategy::largest);

/// Weighted silhouette sum `sum_i w_i * s_i`; a diagnostic only.
double compute_objective_f(std::span<const double> weights, std::span<const double> scores);

struct CorePeripherySplit {
    std::vector<double> medians;                 ///< Per-cluster median score.
    std::vector<std::vector<std::size_t>> core;      ///< Point indices scoring strictly above the median.
    std::vector<std::vector<std::size_t>> periphery; ///< Remaining evaluated points.
};

/// Splits each cluster's evaluated points at the cluster's median score. `scores[i]` belongs to `evaluated[i]`.
CorePeripherySplit core_periphery_split(const Partition& part, std::span<const double> scores,
                                        std::span<const std::size_t> evaluated);

/**
 * Settings for the shared refinement loop.
 * `objective` and `mode` define the S(t) used for best-partition retention.
 */
struct LoopSettings {
    double tau = 1e-4;
    std::size_t max_iter = 100;
    Objective objective = Objective::macro_avg();
    SilhouetteMode mode = SilhouetteMode::exact;
    std::optional<std::size_t> sample_size;
    std::uint64_t seed = 0;
    ReinitStrategy reinit = ReinitStrategy::largest;
    bool record_labels = false;
};

/// Produces weights aligned with `report.evaluated_indices` for the partition the report was computed on.
using Weigher = std::function<std::vector<double>(const Partition&, const SilhouetteReport&)>;

/**
 * The loop shared by K-Sil and every baseline. Each step weights the scored points, moves the centroids to the
 * weighted means, reassigns all points, repairs empty clusters, and scores the new labels; the best-scoring
 * partition is kept. Stops once the mean centroid movement drops below `tau` or after `max_iter` steps.
 */
RunResult run_weighted_loop(const Dataset& data, Partition initial, const LoopSettings& settings, const Weigher& weigher);

/// Scores `part` the way the loop does (same mode, and the same sample when sampling is on).
SilhouetteReport loop_score(const Dataset& data, const Partition& part, const LoopSettings& settings);

LoopSettings loop_settings(const KsilConfig& cfg);

/// Initial partition for `cfg`, drawn from the seed's init stream. Baselines use the same path.
Partition initial_partition(const Dataset& data, std::size_t k, InitMethod method, std::uint64_t seed);

/**
 * Runs K-Sil. With a fixed sensitivity this is a single refinement run; with automatic sensitivity it is
 * `auto_tune_p()`'s best run.
 */
RunResult run_ksil(const Dataset& data, const KsilConfig& cfg);

/// As above, starting from a given partition instead of drawing one.
RunResult run_ksil(const Dataset& data, const KsilConfig& cfg, const Partition& initial);

struct TuneResult {
    double best_p = 0;
    RunResult run;
    std::vector<double> candidates;
    std::vector<double> objectives; ///< best_objective per candidate, aligned with `candidates`.
};

/**
 * Runs K-Sil once per grid value from the same initial partition and keeps the run with the highest best objective.
 * Ties go to the smaller `p`. Candidates run concurrently when `cfg.parallel` is set; the result is the same either way.
 */
TuneResult auto_tune_p(const Dataset& data, const KsilConfig& cfg);
TuneResult auto_tune_p(const Dataset& data, const KsilConfig& cfg, const Partition& initial);

} // namespace ksil

#endif

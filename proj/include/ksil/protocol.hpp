#ifndef KSIL_PROTOCOL_HPP
#define KSIL_PROTOCOL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ksil/baselines.hpp"
#include "ksil/core.hpp"
#include "ksil/evaluation.hpp"
#include "ksil/silhouette.hpp"

/**
 * @file protocol.hpp
 * @brief Paired multi-trial comparison of K-Sil against the baselines.
 */

namespace ksil {

enum class AlgoKind { ksil, kmeans, density, lof };

const char* to_string(AlgoKind algo);
AlgoKind parse_algo(const std::string& name);

/// One refinement run made by the protocol, handed to `ProtocolConfig::observe`.
struct RunObservation {
    AlgoKind algo;
    std::size_t k;
    std::size_t trial;
    double parameter;  ///< p for K-Sil, h for neighbourhood baselines, 0 for k-means.
    const RunResult& run;
    const LoopSettings& settings;
};

struct ProtocolConfig {
    std::vector<std::size_t> k_values{2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::size_t trials = 30;
    /// The first entry is the subject; every other entry is compared against it.
    std::vector<AlgoKind> algos{AlgoKind::ksil, AlgoKind::kmeans, AlgoKind::density, AlgoKind::lof};
    /// Template for K-Sil runs; `k` and `seed` are overwritten per trial.
    KsilConfig ksil = [] {
        KsilConfig cfg;
        cfg.sensitivity = Sensitivity::tuned();
        return cfg;
    }();
    bool tune_neighbors = true;
    std::vector<std::size_t> neighbor_grid = default_neighbor_grid();
    std::size_t density_h = 10;
    std::size_t lof_h = 5;
    std::optional<std::size_t> ground_truth_k;
    std::uint64_t seed = 0;
    double significance = 0.05;
    bool parallel = false;  ///< Run trials on a pool of hardware_concurrency() threads.
    /// Called for K-Sil's retained run and every neighbourhood candidate. May be called from several threads.
    std::function<void(const RunObservation&)> observe;
};

/// Seed shared by every algorithm in trial `trial` at cluster count `k`.
std::uint64_t trial_seed(std::uint64_t master, std::size_t k, std::size_t trial);

struct TrialRecord {
    std::size_t k = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::vector<double> objective; ///< Exact objective of each algorithm's retained partition.
    std::vector<double> micro;
    std::vector<double> macro;
    std::vector<double> parameter; ///< Tuned p for K-Sil, chosen h for neighbourhood baselines, 0 otherwise.
    std::vector<double> nmi;       ///< Empty without ground-truth labels.
};

struct PairedComparison {
    std::string subject;
    std::string baseline;
    std::string scope;  ///< "all_k" or "ground_truth_k".
    std::size_t pairs = 0;
    std::optional<WilcoxonResult> wilcoxon;  ///< Unset when too few non-zero differences remain.
    std::optional<double> mean_relative_improvement;
    bool significant = false;
};

struct NmiSummary {
    std::string algo;
    std::size_t k = 0;
    std::vector<double> samples;
    ConfidenceInterval interval;
};

struct ComparisonReport {
    std::string dataset;
    std::size_t n = 0;
    std::size_t d = 0;
    std::string objective;
    std::vector<std::string> algos;
    std::vector<std::size_t> k_values;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::optional<std::size_t> ground_truth_k;
    std::vector<TrialRecord> records;
    std::vector<PairedComparison> comparisons;
    std::vector<NmiSummary> nmi;
};

/**
 * For every `k` and trial, runs each algorithm from one shared initial partition and scores the retained
 * partition with the exact silhouette. Paired Wilcoxon tests and mean relative improvements are reported for
 * the subject against each baseline, over all `k` and at the ground-truth `k` when declared; with ground-truth
 * labels, NMI at the ground-truth `k` is summarized with t-based 95% intervals.
 */
ComparisonReport run_comparison_protocol(const Dataset& data, const ProtocolConfig& cfg);

/// Exact, ApR and ApS scores of one partition side by side.
struct ApproxComparison {
    std::string dataset;
    std::size_t k = 0;
    Aggregates exact;
    Aggregates apr;
    Aggregates aps;
    double rho_apr = 0;  ///< Spearman correlation of ApR point scores with exact ones.
    double rho_aps = 0;
};

/// Scores every point of `part` with the three silhouette routines. ApS uses the cluster means as centroids.
ApproxComparison compare_approximations(const Dataset& data, const Partition& part, double alpha = 0.5);

/// The k-means partition (k-means++ init) used as reference when judging approximations.
Partition reference_kmeans_partition(const Dataset& data, std::size_t k, std::uint64_t seed);

} // namespace ksil

#endif

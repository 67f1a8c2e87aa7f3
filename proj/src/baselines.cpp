#include "ksil/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "ksil/silhouette.hpp"

namespace ksil {

LoopSettings loop_settings(const LloydConfig& cfg) {
    LoopSettings settings;
    settings.tau = cfg.tau;
    settings.max_iter = cfg.max_iter;
    settings.objective = cfg.objective;
    settings.mode = cfg.mode;
    settings.seed = cfg.seed;
    settings.reinit = cfg.reinit;
    settings.record_labels = cfg.record_labels;
    return settings;
}

namespace {

void check_lloyd(const LloydConfig& cfg, std::size_t n) {
    KsilConfig probe;
    probe.k = cfg.k;
    probe.tau = cfg.tau;
    probe.max_iter = cfg.max_iter;
    probe.objective = cfg.objective;
    validate_config(probe, n);
}

void check_neighbors(const Dataset& data, std::size_t h) {
    if (h < 1 || h >= data.size()) {
        throw Error(ErrorCode::InvalidConfig, "neighbour count must lie in [1, n), got " + std::to_string(h));
    }
}

} // namespace

RunResult run_kmeans(const Dataset& data, const LloydConfig& cfg) {
    check_lloyd(cfg, data.size());
    return run_kmeans(data, cfg, initial_partition(data, cfg.k, cfg.init, cfg.seed));
}

RunResult run_kmeans(const Dataset& data, const LloydConfig& cfg, const Partition& initial) {
    const std::vector<double> unit(data.size(), 1.0);
    return run_weighted_kmeans(data, cfg, unit, initial);
}

RunResult run_weighted_kmeans(const Dataset& data, const LloydConfig& cfg, std::span<const double> weights) {
    check_lloyd(cfg, data.size());
    return run_weighted_kmeans(data, cfg, weights, initial_partition(data, cfg.k, cfg.init, cfg.seed));
}

RunResult run_weighted_kmeans(const Dataset& data, const LloydConfig& cfg, std::span<const double> weights, const Partition& initial) {
    check_lloyd(cfg, data.size());
    if (weights.size() != data.size()) {
        throw Error(ErrorCode::LengthMismatch, "need one weight per point");
    }
    std::vector<double> fixed(weights.begin(), weights.end());
    const Weigher weigher = [fixed = std::move(fixed)](const Partition&, const SilhouetteReport& report) {
        std::vector<double> out(report.evaluated_indices.size());
        for (std::size_t pos = 0; pos < out.size(); ++pos) {
            out[pos] = fixed[report.evaluated_indices[pos]];
        }
        return out;
    };
    return run_weighted_loop(data, initial, loop_settings(cfg), weigher);
}

NeighborTable nearest_neighbors(const Dataset& data, std::size_t h) {
    check_neighbors(data, h);
    const auto n = data.size();
    NeighborTable table;
    table.index.resize(n);
    table.dist.resize(n);

    std::vector<std::pair<double, std::size_t>> candidates;
    for (std::size_t i = 0; i < n; ++i) {
        candidates.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                candidates.emplace_back(distance(data.points.row(i), data.points.row(j)), j);
            }
        }
        std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(h), candidates.end());
        for (std::size_t r = 0; r < h; ++r) {
            table.dist[i].push_back(candidates[r].first);
            table.index[i].push_back(candidates[r].second);
        }
    }
    return table;
}

WeightVector density_weights(const Dataset& data, const NeighborhoodParams& params) {
    const auto table = nearest_neighbors(data, params.h);
    WeightVector out;
    out.scheme = WeightScheme::power;
    out.sensitivity = 0;
    out.weights.resize(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double mean = std::accumulate(table.dist[i].begin(), table.dist[i].end(), 0.0) / static_cast<double>(params.h);
        out.weights[i] = 1.0 / (mean + params.epsilon);
    }
    return out;
}

std::vector<double> local_outlier_factors(const Dataset& data, const NeighborhoodParams& params) {
    const auto table = nearest_neighbors(data, params.h);
    const auto n = data.size();

    std::vector<double> k_distance(n);
    for (std::size_t i = 0; i < n; ++i) {
        k_distance[i] = table.dist[i].back();
    }

    std::vector<double> lrd(n);
    for (std::size_t i = 0; i < n; ++i) {
        double reach = 0;
        for (std::size_t r = 0; r < params.h; ++r) {
            reach += std::max(k_distance[table.index[i][r]], table.dist[i][r]);
        }
        lrd[i] = 1.0 / (reach / static_cast<double>(params.h) + params.epsilon);
    }

    std::vector<double> lof(n);
    for (std::size_t i = 0; i < n; ++i) {
        double ratio = 0;
        for (auto j : table.index[i]) {
            ratio += lrd[j];
        }
        lof[i] = ratio / (static_cast<double>(params.h) * lrd[i]);
    }
    return lof;
}

WeightVector lof_weights(const Dataset& data, const NeighborhoodParams& params) {
    const auto lof = local_outlier_factors(data, params);
    WeightVector out;
    out.weights.resize(lof.size());
    for (std::size_t i = 0; i < lof.size(); ++i) {
        out.weights[i] = 1.0 / std::max(lof[i], 1.0);
    }
    return out;
}

const char* to_string(NeighborhoodAlgo algo) {
    return algo == NeighborhoodAlgo::density ? "density" : "lof";
}

NeighborhoodTuneResult tune_neighborhood(const Dataset& data, const LloydConfig& cfg, NeighborhoodAlgo algo,
                                         std::span<const std::size_t> grid) {
    check_lloyd(cfg, data.size());
    return tune_neighborhood(data, cfg, algo, grid, initial_partition(data, cfg.k, cfg.init, cfg.seed));
}

NeighborhoodTuneResult tune_neighborhood(const Dataset& data, const LloydConfig& cfg, NeighborhoodAlgo algo,
                                         std::span<const std::size_t> grid, const Partition& initial) {
    NeighborhoodTuneResult out;
    const auto everything = all_indices(data.size());
    bool have_best = false;
    double best_objective = 0;

    for (auto h : grid) {
        if (h < 1 || h >= data.size()) {
            continue;
        }
        const NeighborhoodParams params{h, 1e-8};
        const auto weights = algo == NeighborhoodAlgo::density ? density_weights(data, params) : lof_weights(data, params);
        auto run = run_weighted_kmeans(data, cfg, weights.weights, initial);
        const auto report = exact_silhouette(data, run.best_partition, everything, cfg.objective.alpha);
        const double objective = report.objective_value(cfg.objective);

        out.candidates.push_back(h);
        out.objectives.push_back(objective);
        if (!have_best || objective > best_objective || (objective == best_objective && h < out.best_h)) {
            have_best = true;
            best_objective = objective;
            out.best_h = h;
            out.run = std::move(run);
        }
    }
    if (!have_best) {
        throw Error(ErrorCode::InvalidConfig, "no usable neighbour count in the grid");
    }
    return out;
}

} // namespace ksil

#include "ksil/engine.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "ksil/weighting.hpp"

namespace ksil {

namespace {

std::vector<std::size_t> pick_random_seeds(std::size_t n, std::size_t k, Rng& rng) {
    auto pool = all_indices(n);
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + rng.uniform_index(n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

std::vector<std::size_t> pick_kmeanspp_seeds(const Dataset& data, std::size_t k, Rng& rng) {
    const auto n = data.size();
    std::vector<std::size_t> seeds;
    seeds.reserve(k);
    std::vector<bool> used(n, false);
    std::vector<double> closest(n, std::numeric_limits<double>::infinity());

    auto add_seed = [&](std::size_t s) {
        seeds.push_back(s);
        used[s] = true;
        for (std::size_t i = 0; i < n; ++i) {
            closest[i] = std::min(closest[i], squared_distance(data.points.row(i), data.points.row(s)));
        }
    };

    add_seed(rng.uniform_index(n));
    while (seeds.size() < k) {
        double total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!used[i]) {
                total += closest[i];
            }
        }

        std::size_t pick = n;
        if (total > 0) {
            const double target = rng.uniform(0.0, total);
            double running = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (used[i] || closest[i] == 0.0) {
                    continue;
                }
                running += closest[i];
                pick = i;
                if (running > target) {
                    break;
                }
            }
        }
        if (pick == n) {
            // Only duplicates of existing seeds remain.
            std::vector<std::size_t> remaining;
            for (std::size_t i = 0; i < n; ++i) {
                if (!used[i]) {
                    remaining.push_back(i);
                }
            }
            pick = remaining[rng.uniform_index(remaining.size())];
        }
        add_seed(pick);
    }
    return seeds;
}

double mean_movement(const Matrix& before, const Matrix& after) {
    double total = 0;
    for (std::size_t c = 0; c < before.rows(); ++c) {
        total += distance(before.row(c), after.row(c));
    }
    return total / static_cast<double>(before.rows());
}

bool has_empty_cluster(std::span<const Label> labels, std::size_t k) {
    std::vector<bool> seen(k, false);
    std::size_t count = 0;
    for (auto label : labels) {
        if (!seen[static_cast<std::size_t>(label)]) {
            seen[static_cast<std::size_t>(label)] = true;
            if (++count == k) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

Partition init_partition(const Dataset& data, std::size_t k, InitMethod method, Rng& rng) {
    if (k < 2) {
        throw Error(ErrorCode::KTooSmall, "k must be at least 2");
    }
    if (k > data.size()) {
        throw Error(ErrorCode::KTooLarge, "k = " + std::to_string(k) + " exceeds n = " + std::to_string(data.size()));
    }

    const auto seeds = method == InitMethod::random ? pick_random_seeds(data.size(), k, rng) : pick_kmeanspp_seeds(data, k, rng);
    Matrix seed_centroids(k, data.dim());
    for (std::size_t c = 0; c < k; ++c) {
        std::copy_n(data.points.row(seeds[c]).begin(), data.dim(), seed_centroids.row(c).begin());
    }

    Partition part;
    part.assignments = assign_labels(data, seed_centroids);
    part.centroids = seed_centroids;
    if (has_empty_cluster(part.assignments, k)) {
        part = reinit_empty(data, std::move(part));
    }
    // Labels follow the means, so the pair is consistent like every later loop state.
    part.centroids = cluster_means(data, part.assignments, k);
    part.assignments = assign_labels(data, part.centroids);
    if (has_empty_cluster(part.assignments, k)) {
        part = reinit_empty(data, std::move(part));
    }
    return part;
}

std::vector<Label> assign_labels(const Dataset& data, const Matrix& centroids) {
    const auto n = data.size();
    const auto k = centroids.rows();
    std::vector<Label> labels(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = data.points.row(i);
        double best = squared_distance(xi, centroids.row(0));
        for (std::size_t c = 1; c < k; ++c) {
            const double d2 = squared_distance(xi, centroids.row(c));
            if (d2 < best) {
                best = d2;
                labels[i] = static_cast<Label>(c);
            }
        }
    }
    return labels;
}

Matrix weighted_centroid_update(const Dataset& data, const Partition& part, std::span<const std::size_t> indices,
                                std::span<const double> weights) {
    if (indices.size() != weights.size()) {
        throw Error(ErrorCode::LengthMismatch, "weights are not aligned with the scored points");
    }
    const auto k = part.k();
    const auto d = data.dim();
    Matrix sums(k, d);
    std::vector<double> totals(k, 0.0);
    for (std::size_t pos = 0; pos < indices.size(); ++pos) {
        const auto i = indices[pos];
        const auto c = static_cast<std::size_t>(part.assignments[i]);
        const double w = weights[pos];
        const auto xi = data.points.row(i);
        auto target = sums.row(c);
        for (std::size_t j = 0; j < d; ++j) {
            target[j] += w * xi[j];
        }
        totals[c] += w;
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (!(totals[c] > 0.0)) {
            throw Error(ErrorCode::ZeroClusterWeight, "cluster " + std::to_string(c) + " has no positive weight");
        }
        for (auto& v : sums.row(c)) {
            v /= totals[c];
        }
    }
    return sums;
}

Matrix weighted_centroid_update(const Dataset& data, const Partition& part, std::span<const double> weights) {
    const auto indices = all_indices(data.size());
    return weighted_centroid_update(data, part, indices, weights);
}

Partition reinit_empty(const Dataset& data, Partition part, ReinitStrategy strategy) {
    const auto k = part.k();
    const auto n = data.size();
    if (k > n) {
        throw Error(ErrorCode::IrreparablePartition, "more clusters than points");
    }

    while (true) {
        auto members = cluster_members(part.assignments, k);
        const auto empty = std::find_if(members.begin(), members.end(), [](const auto& m) { return m.empty(); });
        if (empty == members.end()) {
            return part;
        }
        const auto target = static_cast<std::size_t>(empty - members.begin());

        std::size_t donor = k;
        double donor_score = -1;
        for (std::size_t c = 0; c < k; ++c) {
            if (members[c].size() < 2) {
                continue;
            }
            double score = static_cast<double>(members[c].size());
            if (strategy == ReinitStrategy::variance) {
                double ss = 0;
                for (auto i : members[c]) {
                    ss += squared_distance(data.points.row(i), part.centroids.row(c));
                }
                score = ss / static_cast<double>(members[c].size());
            }
            if (score > donor_score) {
                donor_score = score;
                donor = c;
            }
        }
        if (donor == k) {
            throw Error(ErrorCode::IrreparablePartition, "no cluster can donate a point to cluster " + std::to_string(target));
        }

        std::size_t farthest = members[donor].front();
        double farthest_d2 = -1;
        for (auto i : members[donor]) {
            const double d2 = squared_distance(data.points.row(i), part.centroids.row(donor));
            if (d2 > farthest_d2) {
                farthest_d2 = d2;
                farthest = i;
            }
        }
        std::copy_n(data.points.row(farthest).begin(), data.dim(), part.centroids.row(target).begin());
        part.assignments[farthest] = static_cast<Label>(target);
    }
}

double compute_objective_f(std::span<const double> weights, std::span<const double> scores) {
    if (weights.size() != scores.size()) {
        throw Error(ErrorCode::LengthMismatch, "weights and scores differ in length");
    }
    double total = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        total += weights[i] * scores[i];
    }
    return total;
}

CorePeripherySplit core_periphery_split(const Partition& part, std::span<const double> scores, std::span<const std::size_t> evaluated) {
    const auto k = part.k();
    std::vector<std::vector<std::size_t>> positions(k);
    for (std::size_t pos = 0; pos < evaluated.size(); ++pos) {
        positions[static_cast<std::size_t>(part.assignments[evaluated[pos]])].push_back(pos);
    }

    CorePeripherySplit split;
    split.medians.assign(k, 0.0);
    split.core.resize(k);
    split.periphery.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
        if (positions[c].empty()) {
            continue;
        }
        std::vector<double> local;
        for (auto pos : positions[c]) {
            local.push_back(scores[pos]);
        }
        split.medians[c] = median(local);
        for (auto pos : positions[c]) {
            (scores[pos] > split.medians[c] ? split.core[c] : split.periphery[c]).push_back(evaluated[pos]);
        }
    }
    return split;
}

SilhouetteReport loop_score(const Dataset& data, const Partition& part, const LoopSettings& settings) {
    const double alpha = settings.objective.alpha;
    if (settings.sample_size && *settings.sample_size < data.size()) {
        // The sample is a pure function of the labels so a retained partition rescored later sees the same points.
        Rng rng = Rng(settings.seed).split(streams::sampling);
        const auto sample = sample_indices(part, *settings.sample_size, settings.objective, rng);
        return silhouette(data, part, sample, settings.mode, alpha);
    }
    const auto everything = all_indices(data.size());
    return silhouette(data, part, everything, settings.mode, alpha);
}

RunResult run_weighted_loop(const Dataset& data, Partition initial, const LoopSettings& settings, const Weigher& weigher) {
    const auto k = initial.k();
    RunResult result;

    Partition current = std::move(initial);
    auto report = loop_score(data, current, settings);
    auto weights = weigher(current, report);
    result.initial_objective = report.objective_value(settings.objective);
    result.best_partition = current;
    result.terminated_by = Termination::max_iter;

    for (std::size_t t = 1; t <= settings.max_iter; ++t) {
        Partition next;
        next.centroids = weighted_centroid_update(data, current, report.evaluated_indices, weights);
        next.assignments = assign_labels(data, next.centroids);
        if (has_empty_cluster(next.assignments, k)) {
            next = reinit_empty(data, std::move(next), settings.reinit);
        }
        const double movement = mean_movement(current.centroids, next.centroids);

        current = std::move(next);
        report = loop_score(data, current, settings);
        weights = weigher(current, report);

        IterationRecord rec;
        rec.objective = report.objective_value(settings.objective);
        rec.weighted_objective = compute_objective_f(weights, report.per_point);
        rec.centroid_movement = movement;
        if (settings.record_labels) {
            rec.assignments = current.assignments;
        }
        result.trace.push_back(std::move(rec));

        if (t == 1 || result.trace.back().objective > result.best_objective) {
            result.best_objective = result.trace.back().objective;
            result.best_partition = current;
            result.best_iteration = t;
        }
        if (movement < settings.tau) {
            result.terminated_by = Termination::threshold;
            break;
        }
    }

    result.iterations_run = result.trace.size();
    return result;
}

LoopSettings loop_settings(const KsilConfig& cfg) {
    LoopSettings settings;
    settings.tau = cfg.tau;
    settings.max_iter = cfg.max_iter;
    settings.objective = cfg.objective;
    settings.mode = cfg.approximate ? SilhouetteMode::apr : SilhouetteMode::exact;
    settings.sample_size = cfg.sample_size;
    settings.seed = cfg.seed;
    settings.reinit = cfg.reinit;
    settings.record_labels = cfg.record_labels;
    return settings;
}

Partition initial_partition(const Dataset& data, std::size_t k, InitMethod method, std::uint64_t seed) {
    Rng rng = Rng(seed).split(streams::init);
    return init_partition(data, k, method, rng);
}

namespace {

RunResult run_fixed(const Dataset& data, const KsilConfig& cfg, double p, const Partition& initial) {
    const SchemeParams params{p, cfg.epsilon};
    const auto scheme = cfg.scheme;
    const Weigher weigher = [scheme, params](const Partition& part, const SilhouetteReport& report) {
        return cluster_weights(scheme, report.per_point, report.evaluated_indices, part.assignments, part.k(), params);
    };
    return run_weighted_loop(data, initial, loop_settings(cfg), weigher);
}

} // namespace

RunResult run_ksil(const Dataset& data, const KsilConfig& cfg) {
    validate_config(cfg, data.size());
    return run_ksil(data, cfg, initial_partition(data, cfg.k, cfg.init, cfg.seed));
}

RunResult run_ksil(const Dataset& data, const KsilConfig& cfg, const Partition& initial) {
    validate_config(cfg, data.size());
    if (cfg.sensitivity.automatic) {
        return auto_tune_p(data, cfg, initial).run;
    }
    return run_fixed(data, cfg, cfg.sensitivity.fixed_p, initial);
}

TuneResult auto_tune_p(const Dataset& data, const KsilConfig& cfg) {
    validate_config(cfg, data.size());
    return auto_tune_p(data, cfg, initial_partition(data, cfg.k, cfg.init, cfg.seed));
}

TuneResult auto_tune_p(const Dataset& data, const KsilConfig& cfg, const Partition& initial) {
    const auto& grid = cfg.sensitivity.automatic ? cfg.sensitivity.grid : std::vector<double>{cfg.sensitivity.fixed_p};
    if (grid.empty()) {
        throw Error(ErrorCode::InvalidConfig, "auto-tune grid is empty");
    }

    std::vector<RunResult> runs(grid.size());
    if (cfg.parallel && grid.size() > 1) {
        std::vector<std::future<RunResult>> pending;
        for (double p : grid) {
            pending.push_back(std::async(std::launch::async, [&data, &cfg, &initial, p] { return run_fixed(data, cfg, p, initial); }));
        }
        for (std::size_t g = 0; g < grid.size(); ++g) {
            runs[g] = pending[g].get();
        }
    } else {
        for (std::size_t g = 0; g < grid.size(); ++g) {
            runs[g] = run_fixed(data, cfg, grid[g], initial);
        }
    }

    TuneResult out;
    out.candidates = grid;
    std::size_t best = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        out.objectives.push_back(runs[g].best_objective);
        const bool better = runs[g].best_objective > runs[best].best_objective;
        const bool tie_smaller = runs[g].best_objective == runs[best].best_objective && grid[g] < grid[best];
        if (better || tie_smaller) {
            best = g;
        }
    }
    out.best_p = grid[best];
    out.run = std::move(runs[best]);
    return out;
}

} // namespace ksil

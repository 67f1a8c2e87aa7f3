#include "ksil/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "ksil/engine.hpp"
#include "ksil/rng.hpp"
#include "ksil/silhouette.hpp"

namespace ksil {

const char* to_string(AlgoKind algo) {
    switch (algo) {
        case AlgoKind::ksil: return "ksil";
        case AlgoKind::kmeans: return "kmeans";
        case AlgoKind::density: return "density";
        case AlgoKind::lof: return "lof";
    }
    return "unknown";
}

AlgoKind parse_algo(const std::string& name) {
    if (name == "ksil") return AlgoKind::ksil;
    if (name == "kmeans") return AlgoKind::kmeans;
    if (name == "density") return AlgoKind::density;
    if (name == "lof") return AlgoKind::lof;
    throw Error(ErrorCode::InvalidConfig, "unknown algorithm '" + name + "'");
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t k, std::size_t trial) {
    return mix_seed(mix_seed(master ^ mix_seed(k)) + trial);
}

namespace {

struct NeighborWeights {
    std::vector<std::size_t> h;
    std::vector<std::vector<double>> weights;
};

NeighborWeights precompute(const Dataset& data, NeighborhoodAlgo algo, const std::vector<std::size_t>& grid) {
    NeighborWeights out;
    for (auto h : grid) {
        if (h < 1 || h >= data.size()) {
            continue;
        }
        const NeighborhoodParams params{h, 1e-8};
        out.h.push_back(h);
        out.weights.push_back((algo == NeighborhoodAlgo::density ? density_weights(data, params) : lof_weights(data, params)).weights);
    }
    if (out.h.empty()) {
        throw Error(ErrorCode::InvalidConfig, "no usable neighbour count for the data size");
    }
    return out;
}

struct AlgoOutcome {
    Partition partition;
    double parameter = 0;
};

LloydConfig lloyd_from(const KsilConfig& ksil, std::size_t k, std::uint64_t seed) {
    LloydConfig cfg;
    cfg.k = k;
    cfg.init = ksil.init;
    cfg.tau = ksil.tau;
    cfg.max_iter = ksil.max_iter;
    cfg.seed = seed;
    cfg.objective = ksil.objective;
    cfg.mode = SilhouetteMode::exact;
    cfg.reinit = ksil.reinit;
    return cfg;
}

using Observer = std::function<void(AlgoKind, const RunResult&, double)>;

AlgoOutcome run_neighbor_algo(const Dataset& data, const LloydConfig& lloyd, const NeighborWeights& table, const Partition& initial,
                              AlgoKind algo, const Observer& observe) {
    const auto everything = all_indices(data.size());
    AlgoOutcome best;
    double best_objective = 0;
    for (std::size_t c = 0; c < table.h.size(); ++c) {
        auto run = run_weighted_kmeans(data, lloyd, table.weights[c], initial);
        const auto h = static_cast<double>(table.h[c]);
        observe(algo, run, h);
        if (table.h.size() == 1) {
            return {std::move(run.best_partition), h};
        }
        const double objective = exact_silhouette(data, run.best_partition, everything, lloyd.objective.alpha).objective_value(lloyd.objective);
        if (c == 0 || objective > best_objective) {
            best_objective = objective;
            best = {std::move(run.best_partition), h};
        }
    }
    return best;
}

/// Runs `job(0..count-1)` on at most hardware_concurrency() threads.
template <typename Job>
void run_pool(std::size_t count, const Job& job) {
    const std::size_t workers = std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            for (std::size_t j = next++; j < count; j = next++) {
                try {
                    job(j);
                } catch (...) {
                    std::lock_guard lock(failure_lock);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

PairedComparison compare(const ComparisonReport& report, std::size_t subject, std::size_t baseline, const std::string& scope,
                         std::optional<std::size_t> only_k, double significance) {
    PairedComparison out;
    out.subject = report.algos[subject];
    out.baseline = report.algos[baseline];
    out.scope = scope;

    std::vector<double> a, b, diffs;
    for (const auto& rec : report.records) {
        if (only_k && rec.k != *only_k) {
            continue;
        }
        a.push_back(rec.objective[subject]);
        b.push_back(rec.objective[baseline]);
        diffs.push_back(rec.objective[subject] - rec.objective[baseline]);
    }
    out.pairs = diffs.size();
    if (diffs.empty()) {
        return out;
    }
    try {
        out.mean_relative_improvement = relative_improvement(a, b);
    } catch (const Error&) {
        out.mean_relative_improvement.reset();
    }
    try {
        out.wilcoxon = wilcoxon_signed_rank(diffs, Alternative::greater);
        out.significant = out.wilcoxon->p_value < significance;
    } catch (const Error&) {
        out.wilcoxon.reset();
        out.significant = false;
    }
    return out;
}

} // namespace

ComparisonReport run_comparison_protocol(const Dataset& data, const ProtocolConfig& cfg) {
    if (cfg.trials < 5) {
        throw Error(ErrorCode::InvalidConfig, "the protocol needs at least 5 trials");
    }
    if (cfg.algos.size() < 2) {
        throw Error(ErrorCode::InvalidConfig, "the protocol needs a subject and at least one baseline");
    }
    if (cfg.k_values.empty()) {
        throw Error(ErrorCode::InvalidConfig, "no cluster counts given");
    }
    for (auto k : cfg.k_values) {
        KsilConfig probe = cfg.ksil;
        probe.k = k;
        validate_config(probe, data.size());
    }

    ComparisonReport report;
    report.dataset = data.name;
    report.n = data.size();
    report.d = data.dim();
    report.objective = to_string(cfg.ksil.objective);
    for (auto algo : cfg.algos) {
        report.algos.push_back(to_string(algo));
    }
    report.k_values = cfg.k_values;
    report.trials = cfg.trials;
    report.seed = cfg.seed;
    report.ground_truth_k = cfg.ground_truth_k;

    std::optional<NeighborWeights> density_table, lof_table;
    for (auto algo : cfg.algos) {
        if (algo == AlgoKind::density && !density_table) {
            density_table = precompute(data, NeighborhoodAlgo::density,
                                       cfg.tune_neighbors ? cfg.neighbor_grid : std::vector<std::size_t>{cfg.density_h});
        }
        if (algo == AlgoKind::lof && !lof_table) {
            lof_table = precompute(data, NeighborhoodAlgo::lof, cfg.tune_neighbors ? cfg.neighbor_grid : std::vector<std::size_t>{cfg.lof_h});
        }
    }

    const auto everything = all_indices(data.size());
    auto run_trial = [&](std::size_t k, std::size_t trial) {
        TrialRecord rec;
        rec.k = k;
        rec.trial = trial;
        rec.seed = trial_seed(cfg.seed, k, trial);

        KsilConfig ksil_cfg = cfg.ksil;
        ksil_cfg.k = k;
        ksil_cfg.seed = rec.seed;
        ksil_cfg.parallel = false;
        ksil_cfg.record_labels = false;
        const auto lloyd = lloyd_from(ksil_cfg, k, rec.seed);
        const auto initial = initial_partition(data, k, ksil_cfg.init, rec.seed);
        const auto ksil_settings = loop_settings(ksil_cfg);
        const auto lloyd_settings = loop_settings(lloyd);
        const Observer observe = [&](AlgoKind algo, const RunResult& run, double parameter) {
            if (cfg.observe) {
                cfg.observe({algo, k, trial, parameter, run, algo == AlgoKind::ksil ? ksil_settings : lloyd_settings});
            }
        };

        for (auto algo : cfg.algos) {
            AlgoOutcome outcome;
            switch (algo) {
                case AlgoKind::ksil: {
                    auto tuned = auto_tune_p(data, ksil_cfg, initial);
                    observe(algo, tuned.run, tuned.best_p);
                    outcome = {std::move(tuned.run.best_partition), tuned.best_p};
                    break;
                }
                case AlgoKind::kmeans: {
                    auto run = run_kmeans(data, lloyd, initial);
                    observe(algo, run, 0.0);
                    outcome = {std::move(run.best_partition), 0.0};
                    break;
                }
                case AlgoKind::density:
                    outcome = run_neighbor_algo(data, lloyd, *density_table, initial, algo, observe);
                    break;
                case AlgoKind::lof:
                    outcome = run_neighbor_algo(data, lloyd, *lof_table, initial, algo, observe);
                    break;
            }
            const auto scores = exact_silhouette(data, outcome.partition, everything, ksil_cfg.objective.alpha);
            rec.objective.push_back(scores.objective_value(ksil_cfg.objective));
            rec.micro.push_back(scores.micro);
            rec.macro.push_back(scores.macro);
            rec.parameter.push_back(outcome.parameter);
            if (data.labels) {
                rec.nmi.push_back(nmi(*data.labels, outcome.partition.assignments));
            }
        }
        return rec;
    };

    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    for (auto k : cfg.k_values) {
        for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
            jobs.emplace_back(k, trial);
        }
    }
    report.records.resize(jobs.size());
    if (cfg.parallel) {
        run_pool(jobs.size(), [&](std::size_t j) { report.records[j] = run_trial(jobs[j].first, jobs[j].second); });
    } else {
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            report.records[j] = run_trial(jobs[j].first, jobs[j].second);
        }
    }

    for (std::size_t b = 1; b < cfg.algos.size(); ++b) {
        report.comparisons.push_back(compare(report, 0, b, "all_k", std::nullopt, cfg.significance));
        if (cfg.ground_truth_k) {
            report.comparisons.push_back(compare(report, 0, b, "ground_truth_k", cfg.ground_truth_k, cfg.significance));
        }
    }

    if (data.labels && cfg.ground_truth_k) {
        for (std::size_t a = 0; a < cfg.algos.size(); ++a) {
            NmiSummary summary;
            summary.algo = report.algos[a];
            summary.k = *cfg.ground_truth_k;
            for (const auto& rec : report.records) {
                if (rec.k == *cfg.ground_truth_k) {
                    summary.samples.push_back(rec.nmi[a]);
                }
            }
            if (summary.samples.size() >= 2) {
                summary.interval = t_confidence_interval(summary.samples);
                report.nmi.push_back(std::move(summary));
            }
        }
    }
    return report;
}

ApproxComparison compare_approximations(const Dataset& data, const Partition& part, double alpha) {
    Partition with_means = part;
    with_means.centroids = cluster_means(data, part.assignments, part.k());
    const auto everything = all_indices(data.size());
    const auto exact = exact_silhouette(data, with_means, everything, alpha);
    const auto apr = approx_silhouette_apr(data, compute_cluster_stats(data, part.assignments, part.k()), with_means, everything, alpha);
    const auto aps = approx_silhouette_aps(data, with_means, everything, alpha);

    ApproxComparison out;
    out.dataset = data.name;
    out.k = part.k();
    out.exact = {exact.micro, exact.macro, exact.combined};
    out.apr = {apr.micro, apr.macro, apr.combined};
    out.aps = {aps.micro, aps.macro, aps.combined};
    out.rho_apr = spearman_rho(apr.per_point, exact.per_point);
    out.rho_aps = spearman_rho(aps.per_point, exact.per_point);
    return out;
}

Partition reference_kmeans_partition(const Dataset& data, std::size_t k, std::uint64_t seed) {
    LloydConfig cfg;
    cfg.k = k;
    cfg.seed = seed;
    cfg.objective = Objective::micro_avg();
    return run_kmeans(data, cfg).best_partition;
}

} // namespace ksil

#include "ksil/silhouette.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ksil {

namespace {

double silhouette_ratio(double a, double b) {
    const double denom = std::max(a, b);
    if (denom <= 0.0) {
        return 0.0;
    }
    return std::clamp((b - a) / denom, -1.0, 1.0);
}

void check_inputs(const Partition& part, std::span<const std::size_t> indices) {
    if (part.k() < 2) {
        throw Error(ErrorCode::SingleCluster, "silhouette needs at least two clusters");
    }
    if (indices.empty()) {
        throw Error(ErrorCode::EmptyIndexSet, "no points to evaluate");
    }
}

SilhouetteReport finish(std::vector<double> scores, std::span<const std::size_t> indices, const Partition& part,
                        SilhouetteMode mode, double alpha) {
    SilhouetteReport report;
    const auto agg = aggregate(scores, part.assignments, part.k(), indices, alpha);
    report.per_point = std::move(scores);
    report.evaluated_indices.assign(indices.begin(), indices.end());
    report.micro = agg.micro;
    report.macro = agg.macro;
    report.combined = agg.combined;
    report.mode = mode;
    return report;
}

} // namespace

ClusterStats compute_cluster_stats(const Dataset& data, std::span<const Label> assignments, std::size_t k) {
    ClusterStats stats;
    stats.centroids = cluster_means(data, assignments, k);
    stats.sizes.assign(k, 0);
    stats.sum_squares.assign(k, 0.0);
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        const auto c = static_cast<std::size_t>(assignments[i]);
        ++stats.sizes[c];
        stats.sum_squares[c] += squared_distance(data.points.row(i), stats.centroids.row(c));
    }
    return stats;
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> out(n);
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
}

SilhouetteReport exact_silhouette(const Dataset& data, const Partition& part, std::span<const std::size_t> indices, double alpha) {
    check_inputs(part, indices);
    const auto k = part.k();
    const auto n = data.size();
    const auto& labels = part.assignments;

    std::vector<std::size_t> sizes(k, 0);
    for (auto label : labels) {
        ++sizes[static_cast<std::size_t>(label)];
    }

    std::vector<double> scores(indices.size());
    std::vector<double> sums(k);
    for (std::size_t pos = 0; pos < indices.size(); ++pos) {
        const auto i = indices[pos];
        const auto own = static_cast<std::size_t>(labels[i]);
        if (sizes[own] <= 1) {
            scores[pos] = 0.0;
            continue;
        }

        std::fill(sums.begin(), sums.end(), 0.0);
        const auto xi = data.points.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            sums[static_cast<std::size_t>(labels[j])] += distance(xi, data.points.row(j));
        }

        const double a = sums[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c != own && sizes[c] > 0) {
                b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
            }
        }
        scores[pos] = std::isfinite(b) ? silhouette_ratio(a, b) : 0.0;
    }

    return finish(std::move(scores), indices, part, SilhouetteMode::exact, alpha);
}

SilhouetteReport approx_silhouette_apr(const Dataset& data, const ClusterStats& stats, const Partition& part,
                                       std::span<const std::size_t> indices, double alpha) {
    check_inputs(part, indices);
    const auto k = part.k();
    std::vector<double> scores(indices.size());
    std::vector<double> sq(k);

    for (std::size_t pos = 0; pos < indices.size(); ++pos) {
        const auto i = indices[pos];
        const auto own = static_cast<std::size_t>(part.assignments[i]);
        const double size_own = static_cast<double>(stats.sizes[own]);
        if (stats.sizes[own] <= 1) {
            scores[pos] = 0.0;
            continue;
        }

        const auto xi = data.points.row(i);
        const double a = std::sqrt((size_own * squared_distance(xi, stats.centroids.row(own)) + stats.sum_squares[own]) /
                                   (size_own - 1.0));
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c == own || stats.sizes[c] == 0) {
                continue;
            }
            const double spread = stats.sum_squares[c] / static_cast<double>(stats.sizes[c]);
            b = std::min(b, std::sqrt(squared_distance(xi, stats.centroids.row(c)) + spread));
        }
        scores[pos] = std::isfinite(b) ? silhouette_ratio(a, b) : 0.0;
    }

    return finish(std::move(scores), indices, part, SilhouetteMode::apr, alpha);
}

SilhouetteReport approx_silhouette_aps(const Dataset& data, const Partition& part, std::span<const std::size_t> indices, double alpha) {
    check_inputs(part, indices);
    const auto k = part.k();
    std::vector<double> scores(indices.size());

    for (std::size_t pos = 0; pos < indices.size(); ++pos) {
        const auto i = indices[pos];
        const auto own = static_cast<std::size_t>(part.assignments[i]);
        const auto xi = data.points.row(i);
        const double a = distance(xi, part.centroids.row(own));
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c != own) {
                b = std::min(b, distance(xi, part.centroids.row(c)));
            }
        }
        scores[pos] = silhouette_ratio(a, b);
    }

    return finish(std::move(scores), indices, part, SilhouetteMode::aps, alpha);
}

SilhouetteReport silhouette(const Dataset& data, const Partition& part, std::span<const std::size_t> indices,
                            SilhouetteMode mode, double alpha) {
    switch (mode) {
        case SilhouetteMode::exact:
            return exact_silhouette(data, part, indices, alpha);
        case SilhouetteMode::apr:
            return approx_silhouette_apr(data, compute_cluster_stats(data, part.assignments, part.k()), part, indices, alpha);
        case SilhouetteMode::aps:
            return approx_silhouette_aps(data, part, indices, alpha);
    }
    throw Error(ErrorCode::InvalidConfig, "unknown silhouette mode");
}

Aggregates aggregate(std::span<const double> per_point, std::span<const Label> assignments, std::size_t k,
                     std::span<const std::size_t> evaluated, double alpha) {
    if (evaluated.empty()) {
        throw Error(ErrorCode::EmptyIndexSet, "no evaluated points to aggregate");
    }
    if (per_point.size() != evaluated.size()) {
        throw Error(ErrorCode::LengthMismatch, "scores and evaluated indices differ in length");
    }

    double total = 0;
    std::vector<double> cluster_total(k, 0.0);
    std::vector<std::size_t> cluster_count(k, 0);
    for (std::size_t pos = 0; pos < evaluated.size(); ++pos) {
        const auto c = static_cast<std::size_t>(assignments[evaluated[pos]]);
        total += per_point[pos];
        cluster_total[c] += per_point[pos];
        ++cluster_count[c];
    }

    Aggregates out;
    out.micro = total / static_cast<double>(evaluated.size());
    double macro_total = 0;
    std::size_t represented = 0;
    for (std::size_t c = 0; c < k; ++c) {
        if (cluster_count[c] > 0) {
            macro_total += cluster_total[c] / static_cast<double>(cluster_count[c]);
            ++represented;
        }
    }
    out.macro = macro_total / static_cast<double>(represented);
    out.combined = alpha * out.micro + (1.0 - alpha) * out.macro;
    return out;
}

std::vector<std::size_t> sample_indices(const Partition& part, std::size_t m, const Objective& objective, Rng& rng) {
    const auto k = part.k();
    const auto n = part.assignments.size();
    if (m < k) {
        throw Error(ErrorCode::SampleTooSmall, "sample size " + std::to_string(m) + " is below k = " + std::to_string(k));
    }
    if (m >= n) {
        return all_indices(n);
    }

    auto members = cluster_members(part.assignments, k);
    std::vector<std::size_t> chosen;
    chosen.reserve(m);

    if (objective.kind == Objective::Kind::micro) {
        auto pool = all_indices(n);
        std::shuffle(pool.begin(), pool.end(), rng.engine());
        chosen.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m));

        std::vector<std::size_t> counts(k, 0);
        for (auto i : chosen) {
            ++counts[static_cast<std::size_t>(part.assignments[i])];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0 || members[c].empty()) {
                continue;
            }
            const auto donor = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
            // Replace the last sampled member of the donor with a random member of the missing cluster.
            for (auto it = chosen.rbegin(); it != chosen.rend(); ++it) {
                if (static_cast<std::size_t>(part.assignments[*it]) == donor) {
                    *it = members[c][rng.uniform_index(members[c].size())];
                    break;
                }
            }
            --counts[donor];
            ++counts[c];
        }
    } else {
        for (auto& group : members) {
            std::shuffle(group.begin(), group.end(), rng.engine());
        }
        const std::size_t quota = m / k;
        std::vector<std::size_t> taken(k, 0);
        std::size_t total = 0;
        for (std::size_t c = 0; c < k; ++c) {
            taken[c] = std::min(quota, members[c].size());
            total += taken[c];
        }
        while (total < m) {
            bool progressed = false;
            for (std::size_t c = 0; c < k && total < m; ++c) {
                if (taken[c] < members[c].size()) {
                    ++taken[c];
                    ++total;
                    progressed = true;
                }
            }
            if (!progressed) {
                break;
            }
        }
        for (std::size_t c = 0; c < k; ++c) {
            chosen.insert(chosen.end(), members[c].begin(), members[c].begin() + static_cast<std::ptrdiff_t>(taken[c]));
        }
    }

    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

} // namespace ksil

#include "ksil/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

namespace ksil {

namespace {

double entropy(const std::map<Label, std::size_t>& counts, double n) {
    double h = 0;
    for (const auto& [label, count] : counts) {
        const double p = static_cast<double>(count) / n;
        h -= p * std::log(p);
    }
    return h;
}

double normal_upper_tail(double z) {
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

} // namespace

double nmi(std::span<const Label> a, std::span<const Label> b) {
    if (a.size() != b.size() || a.empty()) {
        throw Error(ErrorCode::LengthMismatch, "label sequences must have equal, non-zero length");
    }
    const double n = static_cast<double>(a.size());
    std::map<Label, std::size_t> count_a, count_b;
    std::map<std::pair<Label, Label>, std::size_t> joint;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++count_a[a[i]];
        ++count_b[b[i]];
        ++joint[{a[i], b[i]}];
    }

    double mi = 0;
    for (const auto& [key, count] : joint) {
        const double nij = static_cast<double>(count);
        mi += nij / n * std::log(n * nij / (static_cast<double>(count_a[key.first]) * static_cast<double>(count_b[key.second])));
    }
    const double denom = 0.5 * (entropy(count_a, n) + entropy(count_b, n));
    if (denom <= 0.0) {
        return 0.0;
    }
    return std::clamp(mi / denom, 0.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
    const auto n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return values[l] < values[r]; });

    std::vector<double> ranks(n);
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && values[order[end]] == values[order[start]]) {
            ++end;
        }
        const double rank = 0.5 * static_cast<double>(start + 1 + end);
        for (std::size_t r = start; r < end; ++r) {
            ranks[order[r]] = rank;
        }
        start = end;
    }
    return ranks;
}

double spearman_rho(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::LengthMismatch, "sequences differ in length");
    }
    if (a.size() < 2) {
        throw Error(ErrorCode::TooFewSamples, "need at least two pairs");
    }
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    const double n = static_cast<double>(a.size());
    const double mean_a = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    const double mean_b = std::accumulate(rb.begin(), rb.end(), 0.0) / n;

    double cov = 0, var_a = 0, var_b = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        const double da = ra[i] - mean_a;
        const double db = rb[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0) {
        throw Error(ErrorCode::ConstantSequence, "rank correlation is undefined for a constant sequence");
    }
    return std::clamp(cov / std::sqrt(var_a * var_b), -1.0, 1.0);
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> diffs, Alternative alternative, WilcoxonMethod method) {
    std::vector<double> nonzero;
    for (double d : diffs) {
        if (d != 0.0) {
            nonzero.push_back(d);
        }
    }
    WilcoxonResult out;
    out.n_zero = diffs.size() - nonzero.size();
    out.n_used = nonzero.size();
    if (nonzero.size() < 5) {
        throw Error(ErrorCode::TooFewPairs, std::to_string(nonzero.size()) + " non-zero differences, need at least 5");
    }

    std::vector<double> magnitudes(nonzero.size());
    std::transform(nonzero.begin(), nonzero.end(), magnitudes.begin(), [](double d) { return std::abs(d); });
    const auto ranks = average_ranks(magnitudes);

    double w_plus = 0;
    for (std::size_t i = 0; i < nonzero.size(); ++i) {
        if (nonzero[i] > 0) {
            w_plus += ranks[i];
        }
    }
    out.statistic = w_plus;

    // Tie sizes among |d| for the variance correction.
    std::vector<double> sorted = magnitudes;
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0;
    bool has_ties = false;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i + 1;
        while (j < sorted.size() && sorted[j] == sorted[i]) {
            ++j;
        }
        const double t = static_cast<double>(j - i);
        if (t > 1) {
            has_ties = true;
            tie_term += t * t * t - t;
        }
        i = j;
    }

    const auto n = nonzero.size();
    const bool use_exact = method == WilcoxonMethod::exact || (method == WilcoxonMethod::automatic && n <= 25 && !has_ties);

    if (use_exact) {
        // Distribution of 2 * W+ over all 2^n sign assignments; doubled ranks are integers even with ties.
        std::vector<int> doubled(n);
        int total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            doubled[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
            total += doubled[i];
        }
        std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
        counts[0] = 1.0;
        int reach = 0;
        for (int r : doubled) {
            for (int s = reach; s >= 0; --s) {
                if (counts[static_cast<std::size_t>(s)] != 0.0) {
                    counts[static_cast<std::size_t>(s + r)] += counts[static_cast<std::size_t>(s)];
                }
            }
            reach += r;
        }
        const double all = std::ldexp(1.0, static_cast<int>(n));
        const auto observed = static_cast<std::size_t>(std::lround(2.0 * w_plus));
        double upper = 0, lower = 0;
        for (std::size_t s = 0; s < counts.size(); ++s) {
            if (s >= observed) {
                upper += counts[s];
            }
            if (s <= observed) {
                lower += counts[s];
            }
        }
        upper /= all;
        lower /= all;
        out.p_value = alternative == Alternative::greater ? upper : std::min(1.0, 2.0 * std::min(upper, lower));
        out.exact = true;
        return out;
    }

    const double nd = static_cast<double>(n);
    const double mean = nd * (nd + 1.0) / 4.0;
    const double variance = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_term / 48.0;
    const double sd = std::sqrt(variance);
    if (alternative == Alternative::greater) {
        out.p_value = normal_upper_tail((w_plus - mean - 0.5) / sd);
    } else {
        const double z = std::max(0.0, std::abs(w_plus - mean) - 0.5) / sd;
        out.p_value = std::min(1.0, 2.0 * normal_upper_tail(z));
    }
    out.exact = false;
    return out;
}

double relative_improvement(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) {
        throw Error(ErrorCode::LengthMismatch, "score vectors must be paired and non-empty");
    }
    double total = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (b[i] == 0.0) {
            throw Error(ErrorCode::ZeroBaseline, "baseline score " + std::to_string(i) + " is zero");
        }
        total += 100.0 * (a[i] - b[i]) / std::abs(b[i]);
    }
    return total / static_cast<double>(a.size());
}

double student_t_quantile(double probability, double dof) {
    const boost::math::students_t dist(dof);
    return boost::math::quantile(dist, probability);
}

ConfidenceInterval t_confidence_interval(std::span<const double> samples, double level) {
    if (samples.size() < 2) {
        throw Error(ErrorCode::TooFewSamples, "need at least two samples");
    }
    const double n = static_cast<double>(samples.size());
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double ss = 0;
    for (double v : samples) {
        ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / (n - 1.0));
    const double half = student_t_quantile(0.5 * (1.0 + level), n - 1.0) * sd / std::sqrt(n);
    return {mean, mean - half, mean + half};
}

} // namespace ksil

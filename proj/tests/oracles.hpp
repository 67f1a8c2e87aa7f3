// Independent brute-force references used by the unit and acceptance tests.
// Nothing here calls into the library code paths under test.
#ifndef KSIL_TESTS_ORACLES_HPP
#define KSIL_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using Points = std::vector<std::vector<double>>;

inline double dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return std::sqrt(s);
}

/// Textbook silhouette: for every point, loop over every other point.
inline std::vector<double> silhouette(const Points& x, const std::vector<int>& labels, int k) {
    const std::size_t n = x.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double a_sum = 0;
        int a_count = 0;
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            double sum = 0;
            int count = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (labels[j] != c || j == i) {
                    continue;
                }
                sum += dist(x[i], x[j]);
                ++count;
            }
            if (c == labels[i]) {
                a_sum = sum;
                a_count = count;
            } else if (count > 0) {
                b = std::min(b, sum / count);
            }
        }
        if (a_count == 0 || !std::isfinite(b)) {
            out[i] = 0.0;
            continue;
        }
        const double a = a_sum / a_count;
        const double m = std::max(a, b);
        out[i] = m > 0 ? (b - a) / m : 0.0;
    }
    return out;
}

/// Wilcoxon W+ and its one-sided / two-sided p-values by enumerating all 2^n sign patterns.
struct WilcoxonEnum {
    double w_plus;
    double p_greater;
    double p_two_sided;
};

inline std::vector<double> avg_ranks(const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double less = 0, equal = 0;
        for (double w : v) {
            if (w < v[i]) ++less;
            if (w == v[i]) ++equal;
        }
        r[i] = less + (equal + 1.0) / 2.0;
    }
    return r;
}

inline WilcoxonEnum wilcoxon_enumerate(const std::vector<double>& diffs) {
    std::vector<double> d;
    for (double v : diffs) {
        if (v != 0) d.push_back(v);
    }
    std::vector<double> mags;
    for (double v : d) mags.push_back(std::abs(v));
    const auto ranks = avg_ranks(mags);
    double w = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] > 0) w += ranks[i];
    }
    const std::uint64_t patterns = std::uint64_t{1} << d.size();
    double ge = 0, le = 0;
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        double s = 0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (mask & (std::uint64_t{1} << i)) s += ranks[i];
        }
        if (s >= w - 1e-9) ge += 1;
        if (s <= w + 1e-9) le += 1;
    }
    ge /= static_cast<double>(patterns);
    le /= static_cast<double>(patterns);
    return {w, ge, std::min(1.0, 2.0 * std::min(ge, le))};
}

/// Plain LOF following the original definition, O(n^2 log n).
inline std::vector<double> lof(const Points& x, std::size_t h) {
    const std::size_t n = x.size();
    std::vector<std::vector<std::size_t>> nbrs(n);
    std::vector<double> kdist(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, std::size_t>> all;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) all.push_back({dist(x[i], x[j]), j});
        }
        std::sort(all.begin(), all.end());
        for (std::size_t r = 0; r < h; ++r) nbrs[i].push_back(all[r].second);
        kdist[i] = all[h - 1].first;
    }
    std::vector<double> lrd(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0;
        for (auto j : nbrs[i]) s += std::max(kdist[j], dist(x[i], x[j]));
        lrd[i] = 1.0 / (s / h + 1e-8);
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0;
        for (auto j : nbrs[i]) s += lrd[j] / lrd[i];
        out[i] = s / h;
    }
    return out;
}

} // namespace oracle

#endif

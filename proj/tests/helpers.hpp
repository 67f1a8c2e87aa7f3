#ifndef KSIL_TESTS_HELPERS_HPP
#define KSIL_TESTS_HELPERS_HPP

#include <random>
#include <vector>

#include "ksil/core.hpp"

namespace testing {

inline ksil::Dataset line(const std::vector<double>& xs) {
    std::vector<std::vector<double>> rows;
    for (double x : xs) {
        rows.push_back({x});
    }
    return ksil::validate_dataset(rows);
}

inline ksil::Dataset from_rows(const std::vector<std::vector<double>>& rows) {
    return ksil::validate_dataset(rows);
}

/// Partition with the given labels and cluster means as centroids.
inline ksil::Partition partition_of(const ksil::Dataset& data, std::vector<ksil::Label> labels, std::size_t k) {
    ksil::Partition part;
    part.centroids = ksil::cluster_means(data, labels, k);
    part.assignments = std::move(labels);
    return part;
}

inline std::vector<std::vector<double>> rows_of(const ksil::Dataset& data) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto r = data.points.row(i);
        rows.emplace_back(r.begin(), r.end());
    }
    return rows;
}

/// Two isotropic Gaussian blobs along the first axis, `gap` apart, `per` points each.
inline ksil::Dataset two_blobs(std::uint64_t seed, std::size_t per, double gap, double sigma = 1.0, std::size_t d = 2) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<std::vector<double>> rows;
    std::vector<ksil::Label> labels;
    for (int c = 0; c < 2; ++c) {
        for (std::size_t i = 0; i < per; ++i) {
            std::vector<double> p(d);
            for (auto& v : p) v = noise(gen);
            p[0] += c * gap;
            rows.push_back(p);
            labels.push_back(c);
        }
    }
    return ksil::validate_dataset(rows, labels, "two_blobs");
}

} // namespace testing

#endif

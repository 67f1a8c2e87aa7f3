#include "ksil/weighting.hpp"

#include <algorithm>
#include <cmath>

namespace ksil {

double median(std::vector<double> values) {
    const auto n = values.size();
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    const double upper = *mid;
    if (n % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(values.begin(), mid);
    return 0.5 * (lower + upper);
}

std::vector<int> dense_rank_desc(std::span<const double> scores) {
    std::vector<double> distinct(scores.begin(), scores.end());
    std::sort(distinct.begin(), distinct.end(), std::greater<>());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::vector<int> ranks(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const auto it = std::lower_bound(distinct.begin(), distinct.end(), scores[i], std::greater<>());
        ranks[i] = static_cast<int>(it - distinct.begin()) + 1;
    }
    return ranks;
}

WeightVector power_weights(std::span<const double> scores, const SchemeParams& params) {
    WeightVector out{std::vector<double>(scores.size(), 1.0), WeightScheme::power, params.p};
    if (scores.size() <= 1 || params.p == 0.0) {
        return out;
    }

    const double lowest = *std::min_element(scores.begin(), scores.end());
    std::vector<double> shifted(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        shifted[i] = scores[i] - lowest + params.epsilon;
    }
    const double pivot = median(shifted);
    if (!(pivot > 0.0)) {
        return out;
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out.weights[i] = std::pow(shifted[i] / pivot, params.p);
    }
    return out;
}

WeightVector exponential_weights(std::span<const double> scores, const SchemeParams& params) {
    WeightVector out{std::vector<double>(scores.size(), 1.0), WeightScheme::exponential, params.p};
    if (scores.size() <= 1 || params.p == 0.0) {
        return out;
    }

    const auto ranks = dense_rank_desc(scores);
    const double max_rank = *std::max_element(ranks.begin(), ranks.end());
    const double pivot = median(std::vector<double>(ranks.begin(), ranks.end()));
    const double scale = max_rank / 2.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out.weights[i] = std::exp(-params.p * (ranks[i] - pivot) / scale);
    }
    return out;
}

WeightVector scheme_weights(WeightScheme scheme, std::span<const double> scores, const SchemeParams& params) {
    return scheme == WeightScheme::power ? power_weights(scores, params) : exponential_weights(scores, params);
}

std::vector<double> cluster_weights(WeightScheme scheme, std::span<const double> scores, std::span<const std::size_t> evaluated,
                                    std::span<const Label> assignments, std::size_t k, const SchemeParams& params) {
    std::vector<std::vector<std::size_t>> positions(k);
    for (std::size_t pos = 0; pos < evaluated.size(); ++pos) {
        positions[static_cast<std::size_t>(assignments[evaluated[pos]])].push_back(pos);
    }

    std::vector<double> weights(scores.size(), 0.0);
    std::vector<double> local;
    for (const auto& group : positions) {
        if (group.empty()) {
            continue;
        }
        local.clear();
        for (auto pos : group) {
            local.push_back(scores[pos]);
        }
        const auto w = scheme_weights(scheme, local, params);
        for (std::size_t g = 0; g < group.size(); ++g) {
            weights[group[g]] = w.weights[g];
        }
    }
    return weights;
}

} // namespace ksil

#include "ksil/core.hpp"

#include <cmath>

namespace ksil {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::RaggedDimensions: return "RaggedDimensions";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::LabelLengthMismatch: return "LabelLengthMismatch";
        case ErrorCode::SingleCluster: return "SingleCluster";
        case ErrorCode::EmptyIndexSet: return "EmptyIndexSet";
        case ErrorCode::SampleTooSmall: return "SampleTooSmall";
        case ErrorCode::KTooSmall: return "KTooSmall";
        case ErrorCode::KTooLarge: return "KTooLarge";
        case ErrorCode::ZeroClusterWeight: return "ZeroClusterWeight";
        case ErrorCode::IrreparablePartition: return "IrreparablePartition";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::ConstantSequence: return "ConstantSequence";
        case ErrorCode::TooFewPairs: return "TooFewPairs";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::ZeroBaseline: return "ZeroBaseline";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::MixedArity: return "MixedArity";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows_ * cols_) {
        throw Error(ErrorCode::RaggedDimensions, "matrix storage does not match its shape");
    }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double out = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double delta = a[i] - b[i];
        out += delta * delta;
    }
    return out;
}

double distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

namespace {

void check_labels(const std::optional<std::vector<Label>>& labels, std::size_t n) {
    if (labels && labels->size() != n) {
        throw Error(ErrorCode::LabelLengthMismatch,
                    std::to_string(labels->size()) + " labels for " + std::to_string(n) + " points");
    }
}

} // namespace

Dataset validate_dataset(const std::vector<std::vector<double>>& rows, std::optional<std::vector<Label>> labels, std::string name) {
    if (rows.empty()) {
        throw Error(ErrorCode::EmptyDataset, "no points supplied");
    }
    const std::size_t d = rows.front().size();
    if (d == 0) {
        throw Error(ErrorCode::RaggedDimensions, "points must have at least one coordinate");
    }
    std::vector<double> values;
    values.reserve(rows.size() * d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != d) {
            throw Error(ErrorCode::RaggedDimensions, "point " + std::to_string(i) + " has dimension " +
                                                         std::to_string(rows[i].size()) + ", expected " + std::to_string(d));
        }
        values.insert(values.end(), rows[i].begin(), rows[i].end());
    }
    return validate_points(Matrix(rows.size(), d, std::move(values)), std::move(labels), std::move(name));
}

Dataset validate_points(Matrix points, std::optional<std::vector<Label>> labels, std::string name) {
    if (points.rows() == 0) {
        throw Error(ErrorCode::EmptyDataset, "no points supplied");
    }
    if (points.cols() == 0) {
        throw Error(ErrorCode::RaggedDimensions, "points must have at least one coordinate");
    }
    for (std::size_t i = 0; i < points.rows(); ++i) {
        for (std::size_t j = 0; j < points.cols(); ++j) {
            if (!std::isfinite(points(i, j))) {
                throw Error(ErrorCode::NonFiniteValue, "point " + std::to_string(i) + ", coordinate " + std::to_string(j));
            }
        }
    }
    check_labels(labels, points.rows());
    return Dataset{std::move(points), std::move(labels), std::move(name)};
}

std::vector<std::size_t> cluster_sizes(const Partition& part) {
    std::vector<std::size_t> sizes(part.k(), 0);
    for (auto label : part.assignments) {
        ++sizes[static_cast<std::size_t>(label)];
    }
    return sizes;
}

std::vector<std::vector<std::size_t>> cluster_members(std::span<const Label> assignments, std::size_t k) {
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        members[static_cast<std::size_t>(assignments[i])].push_back(i);
    }
    return members;
}

std::string check_partition(const Partition& part, std::size_t n) {
    if (part.assignments.size() != n) {
        return "assignment count " + std::to_string(part.assignments.size()) + " != " + std::to_string(n);
    }
    const auto k = part.k();
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto label = part.assignments[i];
        if (label < 0 || static_cast<std::size_t>(label) >= k) {
            return "point " + std::to_string(i) + " has out-of-range label " + std::to_string(label);
        }
        ++sizes[static_cast<std::size_t>(label)];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] == 0) {
            return "cluster " + std::to_string(c) + " is empty";
        }
    }
    return {};
}

Matrix cluster_means(const Dataset& data, std::span<const Label> assignments, std::size_t k) {
    const auto d = data.dim();
    Matrix means(k, d);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        const auto c = static_cast<std::size_t>(assignments[i]);
        auto row = data.points.row(i);
        auto target = means.row(c);
        for (std::size_t j = 0; j < d; ++j) {
            target[j] += row[j];
        }
        ++counts[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) {
            continue;
        }
        for (auto& v : means.row(c)) {
            v /= static_cast<double>(counts[c]);
        }
    }
    return means;
}

const char* to_string(SilhouetteMode mode) {
    switch (mode) {
        case SilhouetteMode::exact: return "exact";
        case SilhouetteMode::apr: return "apr";
        case SilhouetteMode::aps: return "aps";
    }
    return "unknown";
}

double Objective::value(double micro, double macro) const {
    switch (kind) {
        case Kind::macro: return macro;
        case Kind::micro: return micro;
        case Kind::combined: return alpha * micro + (1.0 - alpha) * macro;
    }
    return macro;
}

std::string to_string(const Objective& objective) {
    switch (objective.kind) {
        case Objective::Kind::macro: return "macro";
        case Objective::Kind::micro: return "micro";
        case Objective::Kind::combined: return "combined";
    }
    return "unknown";
}

double SilhouetteReport::objective_value(const Objective& objective) const {
    return objective.value(micro, macro);
}

const char* to_string(WeightScheme scheme) {
    return scheme == WeightScheme::power ? "power" : "exponential";
}

const char* to_string(Termination termination) {
    return termination == Termination::threshold ? "threshold" : "max_iter";
}

const char* to_string(InitMethod method) {
    return method == InitMethod::random ? "random" : "kmeanspp";
}

void validate_config(const KsilConfig& cfg, std::size_t n) {
    if (cfg.k < 2) {
        throw Error(ErrorCode::KTooSmall, "k must be at least 2, got " + std::to_string(cfg.k));
    }
    if (cfg.k >= n) {
        throw Error(ErrorCode::KTooLarge, "k must be smaller than n = " + std::to_string(n) + ", got " + std::to_string(cfg.k));
    }
    if (!(cfg.tau > 0)) {
        throw Error(ErrorCode::InvalidConfig, "tau must be positive");
    }
    if (cfg.max_iter < 1) {
        throw Error(ErrorCode::InvalidConfig, "max_iter must be at least 1");
    }
    if (!(cfg.objective.alpha >= 0.0 && cfg.objective.alpha <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "alpha must lie in [0, 1]");
    }
    if (!(cfg.epsilon > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "epsilon must be positive");
    }
    if (cfg.sample_size) {
        if (*cfg.sample_size < cfg.k) {
            throw Error(ErrorCode::SampleTooSmall, "sample size must be at least k");
        }
        if (*cfg.sample_size > n) {
            throw Error(ErrorCode::InvalidConfig, "sample size exceeds the number of points");
        }
    }
    if (cfg.sensitivity.automatic) {
        if (cfg.sensitivity.grid.empty()) {
            throw Error(ErrorCode::InvalidConfig, "auto-tune grid is empty");
        }
        for (double p : cfg.sensitivity.grid) {
            if (!(p >= 0.0) || !std::isfinite(p)) {
                throw Error(ErrorCode::InvalidConfig, "sensitivity values must be finite and non-negative");
            }
        }
    } else if (!(cfg.sensitivity.fixed_p >= 0.0) || !std::isfinite(cfg.sensitivity.fixed_p)) {
        throw Error(ErrorCode::InvalidConfig, "sensitivity must be finite and non-negative");
    }
}

} // namespace ksil

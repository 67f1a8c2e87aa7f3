#ifndef KSIL_CORE_HPP
#define KSIL_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

/**
 * @file core.hpp
 * @brief Domain types shared by the clustering engine, baselines and evaluation code.
 */

namespace ksil {

/**
 * Error categories raised by the library.
 * Every failure surfaces as a `ksil::Error` carrying one of these codes.
 */
enum class ErrorCode {
    EmptyDataset,
    RaggedDimensions,
    NonFiniteValue,
    LabelLengthMismatch,
    SingleCluster,
    EmptyIndexSet,
    SampleTooSmall,
    KTooSmall,
    KTooLarge,
    ZeroClusterWeight,
    IrreparablePartition,
    InvalidConfig,
    LengthMismatch,
    ConstantSequence,
    TooFewPairs,
    TooFewSamples,
    ZeroBaseline,
    InvalidSpec,
    ParseError,
    MixedArity,
    IoError
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

using Label = std::int32_t;

/**
 * Dense row-major matrix of doubles; rows are observations.
 */
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }

    double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

    const std::vector<double>& values() const { return values_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);

/**
 * A validated point set. Construct through `validate_dataset()` so that the invariants hold:
 * at least one point, a common dimension of at least one, finite coordinates, and labels (if any) aligned with the points.
 */
struct Dataset {
    Matrix points;
    std::optional<std::vector<Label>> labels;
    std::string name;

    std::size_t size() const { return points.rows(); }
    std::size_t dim() const { return points.cols(); }
};

/**
 * Builds a `Dataset` from raw rows, checking every invariant.
 * Throws `Error` with `EmptyDataset`, `RaggedDimensions`, `NonFiniteValue` or `LabelLengthMismatch`.
 */
Dataset validate_dataset(const std::vector<std::vector<double>>& rows,
                         std::optional<std::vector<Label>> labels = std::nullopt,
                         std::string name = {});

/// Same checks as above for an already-dense matrix.
Dataset validate_points(Matrix points, std::optional<std::vector<Label>> labels = std::nullopt, std::string name = {});

/**
 * Assignment of points to `k` clusters plus the cluster centroids.
 */
struct Partition {
    std::vector<Label> assignments;
    Matrix centroids;

    std::size_t k() const { return centroids.rows(); }
    bool operator==(const Partition&) const = default;
};

/// Member count of each cluster.
std::vector<std::size_t> cluster_sizes(const Partition& part);

/// Member indices of each cluster, in increasing order.
std::vector<std::vector<std::size_t>> cluster_members(std::span<const Label> assignments, std::size_t k);

/**
 * Checks that every label is in range and every cluster is non-empty.
 * Returns an empty string when valid, else a description of the first violation.
 */
std::string check_partition(const Partition& part, std::size_t n);

/// Arithmetic means of each cluster's members. Empty clusters keep a zero row.
Matrix cluster_means(const Dataset& data, std::span<const Label> assignments, std::size_t k);

enum class SilhouetteMode { exact, apr, aps };

const char* to_string(SilhouetteMode mode);

/**
 * Which silhouette aggregate a run maximizes.
 * `combined` is `alpha * micro + (1 - alpha) * macro`.
 */
struct Objective {
    enum class Kind { macro, micro, combined };

    Kind kind = Kind::macro;
    double alpha = 0.5;

    double value(double micro, double macro) const;

    static Objective macro_avg() { return {Kind::macro, 0.5}; }
    static Objective micro_avg() { return {Kind::micro, 0.5}; }
    static Objective combined_avg(double alpha) { return {Kind::combined, alpha}; }
};

std::string to_string(const Objective& objective);

struct SilhouetteReport {
    std::vector<double> per_point;
    std::vector<std::size_t> evaluated_indices;
    double micro = 0;
    double macro = 0;
    double combined = 0;
    SilhouetteMode mode = SilhouetteMode::exact;

    /// Picks micro, macro or the combination according to `objective`.
    double objective_value(const Objective& objective) const;
};

enum class WeightScheme { power, exponential };

const char* to_string(WeightScheme scheme);

struct WeightVector {
    std::vector<double> weights;
    WeightScheme scheme = WeightScheme::power;
    double sensitivity = 0;
};

struct IterationRecord {
    double objective = 0;          ///< S(t), silhouette objective on the labels after reassignment.
    double weighted_objective = 0; ///< F(t) = sum of weight * silhouette over the scored points.
    double centroid_movement = 0;  ///< (1/k) * sum of centroid displacements.
    std::vector<Label> assignments; ///< Labels after this step.
};

enum class Termination { threshold, max_iter };

const char* to_string(Termination termination);

/**
 * Outcome of one refinement run.
 * `trace[t - 1]` describes the partition after refinement step `t`; the initial partition is scored in
 * `initial_objective` but is never retained, so `best_objective` is the maximum objective over the trace.
 */
struct RunResult {
    Partition best_partition;
    double best_objective = -1;
    double initial_objective = -1;
    std::size_t best_iteration = 0; ///< Step that produced `best_partition`, counting from 1.
    std::size_t iterations_run = 0; ///< Number of refinement steps, equal to `trace.size()`.
    std::vector<IterationRecord> trace;
    Termination terminated_by = Termination::max_iter;
};

enum class InitMethod { random, kmeanspp };

const char* to_string(InitMethod method);

enum class ReinitStrategy { largest, variance };

/**
 * Sensitivity is either fixed or tuned over a grid.
 */
struct Sensitivity {
    bool automatic = false;
    double fixed_p = 2.0;
    std::vector<double> grid = default_grid();

    static std::vector<double> default_grid() { return {0, 0.5, 1, 2, 3, 5, 8, 12, 16, 20}; }
    static Sensitivity fixed(double p) { return {false, p, default_grid()}; }
    static Sensitivity tuned(std::vector<double> grid = default_grid()) { return {true, 0, std::move(grid)}; }
};

struct KsilConfig {
    std::size_t k = 2;
    Objective objective = Objective::macro_avg();
    InitMethod init = InitMethod::kmeanspp;
    WeightScheme scheme = WeightScheme::power;
    Sensitivity sensitivity = Sensitivity::fixed(2.0);
    std::optional<std::size_t> sample_size;
    bool approximate = false;
    double tau = 1e-4;
    std::size_t max_iter = 100;
    std::uint64_t seed = 0;
    double epsilon = 1e-8;
    ReinitStrategy reinit = ReinitStrategy::largest;
    bool record_labels = false;  ///< Keep per-iteration assignments in the trace.
    bool parallel = false;       ///< Run auto-tune candidates concurrently.
};

/// Throws `InvalidConfig` (or `KTooSmall`/`KTooLarge`/`SampleTooSmall`) when `cfg` cannot run on `n` points.
void validate_config(const KsilConfig& cfg, std::size_t n);

} // namespace ksil

#endif

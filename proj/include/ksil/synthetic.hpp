#ifndef KSIL_SYNTHETIC_HPP
#define KSIL_SYNTHETIC_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ksil/core.hpp"

namespace ksil {

enum class Family { s1, s2, s3, s4, blobs };

const char* to_string(Family family);
Family parse_family(const std::string& name);

/**
 * Parameters of a labelled synthetic data set. `make_spec()` fills in the defaults of each family:
 *
 * - s1: 500 points, 5 isotropic Gaussians in 2-d with standard deviations 0.4, 0.8, 1.2, 1.6 and 2.0.
 * - s2: 500 points, 5 Gaussians with sigma 1 in 12-d, centres at 12 times the first five unit vectors.
 * - s3: as s2 with sigma 2.5.
 * - s4: 1500 points in 2-d, a noisy circle and a noisy segment with 375 points each plus 750 uniform noise points.
 * - blobs: Gaussians with centres drawn uniformly from [-10, 10]^d.
 *
 * Noise points carry label `k` (one past the last cluster label).
 */
struct SyntheticSpec {
    Family family = Family::blobs;
    std::size_t n = 500;
    std::size_t d = 2;
    std::size_t k = 5;
    std::vector<double> sigmas{1.0};  ///< One value for all clusters, or one per cluster.
    double noise_fraction = 0.0;
    std::uint64_t seed = 0;
};

SyntheticSpec make_spec(Family family, std::uint64_t seed);

/// Number of ground-truth groups, counting the noise group when present.
std::size_t label_count(const SyntheticSpec& spec);

/// Throws `InvalidSpec` for inconsistent parameters.
Dataset generate_synthetic(const SyntheticSpec& spec);

/// Per-feature z-scores with the population standard deviation; constant features become 0.
Dataset standardize(const Dataset& data);

} // namespace ksil

#endif

#include "ksil/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "ksil/rng.hpp"

namespace ksil {

namespace {

// Fixed cluster centres for s1.
constexpr std::array<std::array<double, 2>, 5> s1_centers{{{-6.0, -4.0}, {0.0, -7.0}, {6.0, -3.0}, {-3.0, 4.0}, {5.0, 5.0}}};
constexpr std::array<double, 5> s1_sigmas{0.4, 0.8, 1.2, 1.6, 2.0};

// s4 geometry.
constexpr double circle_x = -5.0, circle_y = 0.0, circle_radius = 3.0;
constexpr double line_x0 = 2.0, line_y0 = -5.0, line_x1 = 8.0, line_y1 = 5.0;
constexpr double shape_jitter = 0.25;
constexpr double noise_x_lo = -10.0, noise_x_hi = 10.0, noise_y_lo = -8.0, noise_y_hi = 8.0;

std::vector<std::size_t> split_counts(std::size_t n, std::size_t k) {
    std::vector<std::size_t> counts(k, n / k);
    for (std::size_t c = 0; c < n % k; ++c) {
        ++counts[c];
    }
    return counts;
}

double sigma_for(const SyntheticSpec& spec, std::size_t c) {
    return spec.sigmas.size() == 1 ? spec.sigmas.front() : spec.sigmas[c];
}

Matrix centers_for(const SyntheticSpec& spec, Rng& rng) {
    Matrix centers(spec.k, spec.d);
    switch (spec.family) {
        case Family::s1:
            for (std::size_t c = 0; c < spec.k; ++c) {
                centers(c, 0) = s1_centers[c % s1_centers.size()][0];
                centers(c, 1) = s1_centers[c % s1_centers.size()][1];
            }
            break;
        case Family::s2:
        case Family::s3:
            for (std::size_t c = 0; c < spec.k; ++c) {
                centers(c, c % spec.d) = 12.0;
            }
            break;
        default:
            for (std::size_t c = 0; c < spec.k; ++c) {
                for (std::size_t j = 0; j < spec.d; ++j) {
                    centers(c, j) = rng.uniform(-10.0, 10.0);
                }
            }
            break;
    }
    return centers;
}

void check_spec(const SyntheticSpec& spec) {
    auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidSpec, why); };
    if (spec.k < 1) fail("k must be positive");
    if (spec.n < spec.k) fail("n must be at least k");
    if (spec.d < 1) fail("d must be positive");
    if (!(spec.noise_fraction >= 0.0 && spec.noise_fraction < 1.0)) fail("noise fraction must lie in [0, 1)");
    if (spec.sigmas.empty() || (spec.sigmas.size() != 1 && spec.sigmas.size() != spec.k)) fail("need one sigma or one per cluster");
    for (double s : spec.sigmas) {
        if (!(s >= 0.0) || !std::isfinite(s)) fail("sigma must be finite and non-negative");
    }
    if (spec.family == Family::s1 && spec.d != 2) fail("s1 is two-dimensional");
    if (spec.family == Family::s1 && spec.k > s1_centers.size()) fail("s1 has at most 5 clusters");
    if ((spec.family == Family::s2 || spec.family == Family::s3) && spec.k > spec.d) fail("s2/s3 need k <= d");
    if (spec.family == Family::s4 && (spec.d != 2 || spec.k != 2)) fail("s4 is two shapes in 2-d");
}

} // namespace

const char* to_string(Family family) {
    switch (family) {
        case Family::s1: return "s1";
        case Family::s2: return "s2";
        case Family::s3: return "s3";
        case Family::s4: return "s4";
        case Family::blobs: return "blobs";
    }
    return "unknown";
}

Family parse_family(const std::string& name) {
    if (name == "s1") return Family::s1;
    if (name == "s2") return Family::s2;
    if (name == "s3") return Family::s3;
    if (name == "s4") return Family::s4;
    if (name == "blobs") return Family::blobs;
    throw Error(ErrorCode::InvalidSpec, "unknown family '" + name + "'");
}

SyntheticSpec make_spec(Family family, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.family = family;
    spec.seed = seed;
    switch (family) {
        case Family::s1:
            spec.n = 500, spec.d = 2, spec.k = 5;
            spec.sigmas.assign(s1_sigmas.begin(), s1_sigmas.end());
            break;
        case Family::s2:
            spec.n = 500, spec.d = 12, spec.k = 5, spec.sigmas = {1.0};
            break;
        case Family::s3:
            spec.n = 500, spec.d = 12, spec.k = 5, spec.sigmas = {2.5};
            break;
        case Family::s4:
            spec.n = 1500, spec.d = 2, spec.k = 2, spec.sigmas = {shape_jitter}, spec.noise_fraction = 0.5;
            break;
        case Family::blobs:
            spec.n = 500, spec.d = 2, spec.k = 5, spec.sigmas = {1.0};
            break;
    }
    return spec;
}

std::size_t label_count(const SyntheticSpec& spec) {
    const auto noise = static_cast<std::size_t>(std::llround(spec.noise_fraction * static_cast<double>(spec.n)));
    return spec.k + (noise > 0 ? 1 : 0);
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
    check_spec(spec);
    Rng root(spec.seed);
    Rng center_rng = root.split(1);
    Rng point_rng = root.split(2);

    const auto noise = static_cast<std::size_t>(std::llround(spec.noise_fraction * static_cast<double>(spec.n)));
    if (spec.n - noise < spec.k) {
        throw Error(ErrorCode::InvalidSpec, "too much noise to leave a point per cluster");
    }
    const auto counts = split_counts(spec.n - noise, spec.k);

    Matrix points(spec.n, spec.d);
    std::vector<Label> labels(spec.n);
    std::size_t row = 0;

    if (spec.family == Family::s4) {
        for (std::size_t c = 0; c < 2; ++c) {
            for (std::size_t i = 0; i < counts[c]; ++i, ++row) {
                const double jitter = point_rng.normal(0.0, sigma_for(spec, c));
                if (c == 0) {
                    const double angle = point_rng.uniform(0.0, 2.0 * std::numbers::pi);
                    points(row, 0) = circle_x + (circle_radius + jitter) * std::cos(angle);
                    points(row, 1) = circle_y + (circle_radius + jitter) * std::sin(angle);
                } else {
                    const double t = point_rng.uniform(0.0, 1.0);
                    const double dx = line_x1 - line_x0, dy = line_y1 - line_y0;
                    const double len = std::hypot(dx, dy);
                    points(row, 0) = line_x0 + t * dx - jitter * dy / len;
                    points(row, 1) = line_y0 + t * dy + jitter * dx / len;
                }
                labels[row] = static_cast<Label>(c);
            }
        }
        for (std::size_t i = 0; i < noise; ++i, ++row) {
            points(row, 0) = point_rng.uniform(noise_x_lo, noise_x_hi);
            points(row, 1) = point_rng.uniform(noise_y_lo, noise_y_hi);
            labels[row] = static_cast<Label>(spec.k);
        }
    } else {
        const auto centers = centers_for(spec, center_rng);
        for (std::size_t c = 0; c < spec.k; ++c) {
            const double sigma = sigma_for(spec, c);
            for (std::size_t i = 0; i < counts[c]; ++i, ++row) {
                for (std::size_t j = 0; j < spec.d; ++j) {
                    points(row, j) = centers(c, j) + point_rng.normal(0.0, sigma);
                }
                labels[row] = static_cast<Label>(c);
            }
        }
        if (noise > 0) {
            std::vector<double> lo(spec.d, 0.0), hi(spec.d, 0.0);
            for (std::size_t j = 0; j < spec.d; ++j) {
                lo[j] = hi[j] = points(0, j);
                for (std::size_t r = 0; r < row; ++r) {
                    lo[j] = std::min(lo[j], points(r, j));
                    hi[j] = std::max(hi[j], points(r, j));
                }
            }
            for (std::size_t i = 0; i < noise; ++i, ++row) {
                for (std::size_t j = 0; j < spec.d; ++j) {
                    points(row, j) = point_rng.uniform(lo[j], hi[j]);
                }
                labels[row] = static_cast<Label>(spec.k);
            }
        }
    }

    return validate_points(std::move(points), std::move(labels), to_string(spec.family));
}

Dataset standardize(const Dataset& data) {
    const auto n = data.size();
    const auto d = data.dim();
    Matrix out = data.points;
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0;
        for (std::size_t i = 0; i < n; ++i) {
            mean += data.points(i, j);
        }
        mean /= static_cast<double>(n);
        double var = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double delta = data.points(i, j) - mean;
            var += delta * delta;
        }
        double sd = std::sqrt(var / static_cast<double>(n));
        // Rounding in the mean can leave a tiny spread on a constant column.
        if (sd <= 1e-12 * std::max(1.0, std::abs(mean))) {
            sd = 0.0;
        }
        for (std::size_t i = 0; i < n; ++i) {
            out(i, j) = sd > 0.0 ? (data.points(i, j) - mean) / sd : 0.0;
        }
    }
    return Dataset{std::move(out), data.labels, data.name};
}

} // namespace ksil

#ifndef KSIL_RNG_HPP
#define KSIL_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>

namespace ksil {

/**
 * Seeded generator that can derive independent child streams.
 *
 * Children are keyed by an integer stream id, so `Rng(s).split(7)` is the same generator no matter
 * how much the parent has already been consumed. All randomness in the library flows through this type.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Child generator for stream `stream`; does not advance this generator.
    Rng split(std::uint64_t stream) const;

    std::uint64_t seed() const { return seed_; }

    /// Uniform integer in [0, n).
    std::size_t uniform_index(std::size_t n);

    /// Uniform real in [lo, hi).
    double uniform(double lo = 0.0, double hi = 1.0);

    double normal(double mean = 0.0, double stddev = 1.0);

    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer, used for seed derivation.
std::uint64_t mix_seed(std::uint64_t x);

} // namespace ksil

#endif

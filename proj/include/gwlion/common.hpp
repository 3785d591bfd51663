#ifndef GWLION_COMMON_HPP
#define GWLION_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace gwlion {

/// Bad run configuration or CLI usage (exit code 2 at the CLI).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Unusable input data: missing files, malformed rows, gaps (exit code 3).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: divergence, non-finite fitness (exit code 4).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Seeded random stream with portable mappings to doubles and ranges.
///
/// All randomness in the toolkit flows through this wrapper so that a run
/// is reproducible from its seed alone. The uniform/normal/index mappings
/// are implemented here instead of via std::*_distribution, whose output
/// is implementation-defined and would break byte-identical reruns across
/// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; consumes exactly two draws.
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    /// Uniform index in [0, n) without modulo bias (Lemire reduction).
    std::size_t index(std::size_t n) {
        const unsigned __int128 m =
            static_cast<unsigned __int128>(gen_()) * static_cast<unsigned __int128>(n);
        return static_cast<std::size_t>(m >> 64);
    }

    /// Bernoulli(p) draw.
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 gen_;
};

}  // namespace gwlion

#endif

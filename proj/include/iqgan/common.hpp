#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

namespace iqgan {

using cdouble = std::complex<double>;

// Error categories map 1:1 onto CLI exit codes (config=2, data=3, numeric=4).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid arguments, malformed gates, inconsistent dimensions, bad config.
class ValidationError : public Error {
public:
    using Error::Error;
};

// File ingestion problems: missing files, bad magic, truncation, count mismatch.
class DataError : public Error {
public:
    using Error::Error;
};

// Numeric failures: degenerate covariance, non-invertible encoding scales.
class NumericError : public Error {
public:
    using Error::Error;
};

// Warning sink for clamp events (arcsin domain, projection range, gradient
// singularities). The default handler prints each distinct message to stderr
// once and suppresses identical repeats; installing an empty handler restores
// the default.
using WarnHandler = std::function<void(const std::string&)>;
void set_warn_handler(WarnHandler handler);
void warn(const std::string& message);

// Deterministic RNG used everywhere randomness is needed. Draws uniforms from
// the top 53 bits of mt19937_64 so streams are identical across platforms
// (std::uniform_real_distribution is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(mix(seed)) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; two uniforms per draw, no cached state.
    double normal(double mean = 0.0, double stddev = 1.0) {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(6.283185307179586 * u2);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Index in [0, n).
    std::size_t index(std::size_t n) {
        auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    // Independent child stream; trajectory t uses child(t) so results do not
    // depend on evaluation order.
    Rng child(std::uint64_t stream) const { return Rng(mix(seed_ ^ mix(stream + 0x9e3779b97f4a7c15ull))); }

private:
    // SplitMix64 finalizer; avoids correlated mt19937_64 states for nearby seeds.
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

} // namespace iqgan

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace speedlab {

/// Environment variable consulted for the default seed of the CLI and suites.
inline constexpr const char* kSeedEnvVar = "SPEEDLAB_SEED";
inline constexpr std::uint64_t kFallbackSeed = 20090101ULL;

/// Reads SPEEDLAB_SEED if set and parseable, otherwise returns kFallbackSeed.
std::uint64_t default_seed();

/// SplitMix64 finalizer; used to derive engine seeds from (seed, stream).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

/// A reproducible random stream identified by (seed, stream id).
///
/// Identical (seed, stream) pairs reproduce identical output on every platform:
/// the engine is std::mt19937_64 (fully specified by the standard) and all
/// variates below are derived from raw 64-bit draws with explicit formulas
/// rather than the implementation-defined std:: distributions.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream), engine_(derive_seed(seed, stream)) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

    /// Child stream for sub-tasks of this stream (e.g. replica r of a claim).
    RngStream substream(std::uint64_t index) const {
        return RngStream(derive_seed(seed_, stream_), index);
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open0() { return 1.0 - uniform(); }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    double exponential(double rate) { return -std::log(uniform_open0()) / rate; }

    /// Uniform integer in [0, n). Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t x = engine_();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                x = engine_();
                m = static_cast<__uint128_t>(x) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Satisfies UniformRandomBitGenerator so std algorithms (shuffle) accept it.
    using result_type = std::uint64_t;
    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

}  // namespace speedlab

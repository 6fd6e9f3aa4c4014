#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>

namespace sampleahead {

/// SplitMix64 finalizer; used to derive independent stream seeds.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Named sub-streams of a master seed. Every run derives the same stream
/// for the same role, so ablations share initial conditions.
enum class Stream : std::uint64_t {
    init = 1,
    sampler = 2,
    generator = 3,
    probe = 4,
    validation = 5,
    test = 6,
    pool = 7,
    real_data = 8,
};

[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master, Stream stream) noexcept {
    return splitmix64(splitmix64(master) ^ (static_cast<std::uint64_t>(stream) * 0xd1b54a32d192ed03ULL));
}

/// Deterministic random source. Distributions are computed from raw engine
/// bits so draws are identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform01() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). n must be positive.
    std::size_t index(std::size_t n) noexcept {
        auto i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    /// Standard normal via Box-Muller (no cached second variate).
    double normal() noexcept {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t bits() noexcept { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace sampleahead

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

namespace riskcert {

// 64-bit finalizer from SplitMix64 (Steele/Lea/Flood; Stafford mix13).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based stream splitting: the key for draw `counter` under a master
// seed is a pure function of (seed, counter), so any draw can be regenerated
// in isolation and evaluation order never matters.
constexpr std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t counter) noexcept {
    return mix64(master_seed ^ mix64(counter));
}

/// Deterministic per-stream generator (SplitMix64 sequence over a derived
/// key). Good enough statistically for coverage simulation; the point here
/// is cheap keyed construction, not cryptography.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t key) noexcept : state_(key) {}

    constexpr std::uint64_t next_u64() noexcept { return mix64(state_++); }

    /// Uniform on the open interval (0,1); never returns 0 or 1, so logs of
    /// either u or 1-u are always finite.
    double next_u01() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    bool bernoulli(double p) noexcept { return next_u01() < p; }

    /// Uniform on {0, ..., bound-1}, unbiased (masked rejection).
    std::uint64_t uniform_below(std::uint64_t bound) noexcept {
        if (bound <= 1) {
            return 0;
        }
        const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(bound - 1);
        for (;;) {
            const std::uint64_t v = next_u64() & mask;
            if (v < bound) {
                return v;
            }
        }
    }

    /// Standard normal via Box-Muller (pairs generated, one cached).
    double normal() noexcept {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = next_u01();
        const double u2 = next_u01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    /// Gamma(shape, 1) via Marsaglia-Tsang squeeze; shape < 1 boosted
    /// through Gamma(shape+1) * U^(1/shape).
    double gamma(double shape) noexcept {
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(next_u01(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) {
                continue;
            }
            v = v * v * v;
            const double u = next_u01();
            if (u < 1.0 - 0.0331 * x * x * x * x) {
                return d * v;
            }
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
                return d * v;
            }
        }
    }

    /// Beta(a,b) as Ga/(Ga+Gb).
    double beta(double a, double b) noexcept {
        const double ga = gamma(a);
        const double gb = gamma(b);
        return ga / (ga + gb);
    }

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace riskcert

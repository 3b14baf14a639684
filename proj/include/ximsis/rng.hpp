#pragma once

#include <cmath>
#include <cstdint>

namespace ximsis {

// SplitMix64 finalizer. Used both as the output function of the counter-based
// generator below and to derive decorrelated child seeds, so a seed plus a
// stream id (column index, replication index, ...) always maps to the same
// stream regardless of execution order.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
    return mix64(base ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

// Small counter-based generator (SplitMix64 stream). Statistically solid for
// Monte Carlo work, trivially splittable, and byte-for-byte reproducible
// across platforms, which the screening and simulation contracts require.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform on [0,1), 53-bit resolution
    double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform on (0,1); never returns an endpoint, safe under log()
    double uniform_open01() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

    // unbiased-enough integer in [0, bound) via 128-bit multiply
    std::uint64_t below(std::uint64_t bound) noexcept {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    // standard normal, Marsaglia polar method with cached spare
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double t = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * t;
        has_spare_ = true;
        return u * t;
    }

    // standard Cauchy (= Student t with 1 df) as a ratio of two normals
    double cauchy() noexcept {
        double den;
        do {
            den = normal();
        } while (den == 0.0);
        return normal() / den;
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace ximsis

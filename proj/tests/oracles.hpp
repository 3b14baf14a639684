#pragma once

// Independent definitional implementations used as test oracles. Everything
// here follows the written definitions literally (quadratic scans, product
// over event times) and stays decoupled from the library's fast paths.

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "ximsis/rng.hpp"
#include "ximsis/survival.hpp"

namespace oracles {

// Ranks by literal counting; input values must be distinct.
inline std::vector<std::int32_t> ranks_by_counting(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::int32_t> r(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (v[j] <= v[i]) ++r[i];
    return r;
}

// j_m(i) by scanning the definitional condition #{k : u_i < u_k <= u_j} = m.
inline std::int32_t right_neighbor_by_scan(std::span<const double> u, std::int32_t i,
                                           std::int32_t m) {
    const std::int32_t n = static_cast<std::int32_t>(u.size());
    for (std::int32_t j = 0; j < n; ++j) {
        std::int32_t between = 0;
        for (std::int32_t k = 0; k < n; ++k)
            if (u[i] < u[k] && u[k] <= u[j]) ++between;
        if (between == m) return j;
    }
    return i;
}

// Straight-from-the-formula revised correlation; distinct u and v only.
inline double xi_by_definition(std::span<const double> u, std::span<const double> v,
                               std::int32_t m) {
    const std::int32_t n = static_cast<std::int32_t>(u.size());
    const std::vector<std::int32_t> r = ranks_by_counting(v);
    std::int64_t sum = 0;
    for (std::int32_t i = 0; i < n; ++i)
        for (std::int32_t k = 1; k <= m; ++k)
            sum += std::min(r[i], r[right_neighbor_by_scan(u, i, k)]);
    const double denom = (n + 1.0) * (static_cast<double>(n) * m + m * (m + 1.0) / 4.0);
    return -2.0 + 6.0 * static_cast<double>(sum) / denom;
}

// Product-limit values by the textbook sweep over distinct event times.
inline std::vector<double> km_by_definition(const ximsis::SurvivalResponse& resp) {
    const std::size_t n = resp.size();
    std::vector<double> times(resp.y.begin(), resp.y.end());
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 1.0;
        for (double tau : times) {
            if (tau > resp.y[i]) break;
            std::int64_t events = 0, at_risk = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (resp.y[j] >= tau) ++at_risk;
                if (resp.y[j] == tau && resp.delta[j]) ++events;
            }
            if (events > 0) s *= 1.0 - static_cast<double>(events) / static_cast<double>(at_risk);
        }
        out[i] = s;
    }
    return out;
}

// Concordance by literal enumeration of all ordered pairs.
inline double concordance_by_pairs(std::span<const double> risk,
                                   const ximsis::SurvivalResponse& resp) {
    const std::size_t n = resp.size();
    double mass = 0.0;
    std::int64_t comparable = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || !(resp.y[i] < resp.y[j]) || !resp.delta[i]) continue;
            ++comparable;
            if (risk[i] > risk[j]) mass += 1.0;
            else if (risk[i] == risk[j]) mass += 0.5;
        }
    }
    return mass / static_cast<double>(comparable);
}

// Distinct-value sample in random order.
inline std::vector<double> distinct_sample(std::size_t n, ximsis::Rng& rng) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i) + rng.uniform01() * 0.25;
    for (std::size_t i = n; i > 1; --i)
        std::swap(v[i - 1], v[rng.below(i)]);
    return v;
}

} // namespace oracles

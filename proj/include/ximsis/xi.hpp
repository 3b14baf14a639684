#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ximsis/rank.hpp"

namespace ximsis {

namespace detail {

// sum_i sum_{k=1..M} min{R_i, R_{j_k(i)}} with j_k built from the u ranks.
// Pure integer accumulation; the value is bounded by n^2 * M.
inline std::int64_t min_rank_sum(const RankedColumn& u_ranks, const RankedColumn& v_ranks,
                                 std::int32_t m) {
    const std::int32_t n = u_ranks.size();
    std::vector<std::int32_t> rv_by_urank(n);
    for (std::int32_t i = 0; i < n; ++i)
        rv_by_urank[u_ranks.ranks[i] - 1] = v_ranks.ranks[i];

    std::int64_t sum = 0;
    for (std::int32_t r = 1; r <= n; ++r) {
        const std::int64_t rv = rv_by_urank[r - 1];
        const std::int32_t right = std::min(m, n - r);
        for (std::int32_t k = 1; k <= right; ++k)
            sum += std::min<std::int64_t>(rv, rv_by_urank[r + k - 1]);
        sum += static_cast<std::int64_t>(m - right) * rv; // j_k(i) = i fallback
    }
    return sum;
}

inline void check_pair(std::size_t nu, std::size_t nv, std::int64_t m) {
    if (nu != nv) throw std::invalid_argument("length mismatch");
    if (nu < 2) throw std::invalid_argument("degenerate sample");
    if (m < 1 || m > static_cast<std::int64_t>(nu))
        throw std::invalid_argument("invalid neighbor count");
}

inline bool is_constant(std::span<const double> v) {
    for (double x : v)
        if (x != v[0]) return false;
    return true;
}

} // namespace detail

// Revised Chatterjee rank correlation from pre-tie-broken ranks:
//
//   xi = -2 + 6 * S / [(n+1) * (n M + M(M+1)/4)],  S = sum of neighbor minima.
//
// Evaluated as a single division (24 S - 2 D) / D with D = (n+1)(4nM + M(M+1))
// so the rational part stays exact in 64-bit integers and the result is the
// correctly rounded value of the underlying rational number.
inline double xi_from_ranks(const RankedColumn& u_ranks, const RankedColumn& v_ranks,
                            std::int32_t m) {
    detail::check_pair(u_ranks.ranks.size(), v_ranks.ranks.size(), m);
    const std::int64_t n = u_ranks.size();
    const std::int64_t s = detail::min_rank_sum(u_ranks, v_ranks, m);
    const std::int64_t d = (n + 1) * (4 * n * m + static_cast<std::int64_t>(m) * (m + 1));
    return static_cast<double>(24 * s - 2 * d) / static_cast<double>(d);
}

// xi_{n,M}(u, v): directed dependence of v on u. Deterministic in tie_seed;
// equals 1 in the limit when v is a function of u and 0 under independence.
// v must not be constant before tie breaking.
inline double revised_xi(std::span<const double> u, std::span<const double> v, std::int32_t m,
                         std::uint64_t tie_seed) {
    detail::check_pair(u.size(), v.size(), m);
    if (detail::is_constant(v)) throw std::invalid_argument("constant column");
    const RankedColumn ur = rank_vector(u, derive_seed(tie_seed, 0));
    const RankedColumn vr = rank_vector(v, derive_seed(tie_seed, 1));
    return xi_from_ranks(ur, vr, m);
}

// Building blocks of xi_{n,M}: Q_{n,M} and U_n over the empirical CDF
// F_n and tail function G_n, linked to xi by
//
//   xi = 4(n-1)/(4n+M+1) * Q/U - 2(M-1)/(4n+M+1).
//
// U_n collapses to (1 - 1/n^2)/6 whenever the v sample is tie-free.
struct XiDecomposition {
    double q_nm = 0.0;
    double u_n = 0.0;
    double xi_nm = 0.0;
    std::int32_t n = 0;
    std::int32_t m_neighbors = 0;

    double reconstructed_xi() const noexcept {
        const double denom = 4.0 * n + m_neighbors + 1.0;
        return 4.0 * (n - 1.0) / denom * (q_nm / u_n) - 2.0 * (m_neighbors - 1.0) / denom;
    }
};

inline XiDecomposition xi_decompose(std::span<const double> u, std::span<const double> v,
                                    std::int32_t m, std::uint64_t tie_seed) {
    detail::check_pair(u.size(), v.size(), m);
    if (detail::is_constant(v)) throw std::invalid_argument("constant column");
    const RankedColumn ur = rank_vector(u, derive_seed(tie_seed, 0));
    const RankedColumn vr = rank_vector(v, derive_seed(tie_seed, 1));

    const std::int64_t n = ur.size();
    const std::int64_t s_min = detail::min_rank_sum(ur, vr, m);
    std::int64_t sum_g2 = 0;     // sum of (n G_n(V_i))^2
    std::int64_t sum_g1mg = 0;   // sum of n G_n(V_i) * (n - n G_n(V_i))
    for (std::int32_t r : vr.ranks) {
        const std::int64_t g = n - r + 1; // #{j : V_j >= V_i} on tie-broken ranks
        sum_g2 += g * g;
        sum_g1mg += g * (n - g);
    }

    XiDecomposition out;
    out.n = static_cast<std::int32_t>(n);
    out.m_neighbors = m;
    const double n3 = static_cast<double>(n) * n * n;
    out.q_nm = static_cast<double>(s_min) / (static_cast<double>(n) * n * m) -
               static_cast<double>(sum_g2) / n3;
    out.u_n = static_cast<double>(sum_g1mg) / n3;
    const std::int64_t d = (n + 1) * (4 * n * m + static_cast<std::int64_t>(m) * (m + 1));
    out.xi_nm = static_cast<double>(24 * s_min - 2 * d) / static_cast<double>(d);
    return out;
}

} // namespace ximsis

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "ximsis/rng.hpp"

namespace ximsis {

// A feature column reduced to integer ranks 1..n. Ties are broken uniformly
// at random by the recorded seed, so the ranks are always a permutation and
// re-ranking the same input with the same seed reproduces them exactly.
struct RankedColumn {
    std::vector<std::int32_t> ranks;
    std::uint64_t tie_seed = 0;

    std::int32_t size() const noexcept { return static_cast<std::int32_t>(ranks.size()); }
};

// R_i = #{j : V_j <= V_i} after seeded uniform tie breaking.
// Strictly increasing transforms of the input leave the output untouched.
inline RankedColumn rank_vector(std::span<const double> values, std::uint64_t tie_seed) {
    const std::size_t n = values.size();
    if (n == 0) throw std::invalid_argument("empty column");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");

    std::vector<std::int32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::int32_t a, std::int32_t b) { return values[a] < values[b]; });

    // Fisher-Yates within each tie group; groups are visited in value order,
    // so the draw sequence depends only on the tie pattern.
    Rng rng(tie_seed);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        for (std::size_t k = j - 1; k > i; --k) {
            const std::size_t pick = i + static_cast<std::size_t>(rng.below(k - i + 1));
            std::swap(order[k], order[pick]);
        }
        i = j;
    }

    RankedColumn out;
    out.tie_seed = tie_seed;
    out.ranks.resize(n);
    for (std::size_t r = 0; r < n; ++r) out.ranks[order[r]] = static_cast<std::int32_t>(r + 1);
    return out;
}

// j_m(i) for m = 1..M: the sample point whose value is the m-th smallest
// among those strictly greater than point i's, falling back to i itself when
// fewer than m points lie to the right. Row-major n x M, 0-based indices.
struct NeighborTable {
    std::int32_t n = 0;
    std::int32_t m = 0;
    std::vector<std::int32_t> indices;

    std::int32_t operator()(std::int32_t i, std::int32_t k) const noexcept {
        return indices[static_cast<std::size_t>(i) * m + k];
    }
};

inline NeighborTable right_neighbors(const RankedColumn& u_ranks, std::int32_t m) {
    const std::int32_t n = u_ranks.size();
    if (m < 1 || m > n) throw std::invalid_argument("invalid neighbor count");

    // by_rank[r-1] = index holding rank r; one O(n) pass replaces the
    // definitional O(n^2) scan.
    std::vector<std::int32_t> by_rank(n);
    for (std::int32_t i = 0; i < n; ++i) by_rank[u_ranks.ranks[i] - 1] = i;

    NeighborTable table;
    table.n = n;
    table.m = m;
    table.indices.resize(static_cast<std::size_t>(n) * m);
    for (std::int32_t i = 0; i < n; ++i) {
        const std::int32_t r = u_ranks.ranks[i];
        for (std::int32_t k = 1; k <= m; ++k)
            table.indices[static_cast<std::size_t>(i) * m + (k - 1)] =
                (r + k <= n) ? by_rank[r + k - 1] : i;
    }
    return table;
}

} // namespace ximsis

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "ximsis/survival.hpp"

namespace ximsis {

// One replication's ranking plus the ground-truth active set (0-based).
struct ReplicationRecord {
    std::vector<std::int32_t> omega_order;
    std::vector<std::int32_t> active;

    friend bool operator==(const ReplicationRecord&, const ReplicationRecord&) = default;
};

// Minimum model size: the deepest position (1-based) an active feature
// occupies in the ranking, i.e. the smallest d whose top-d set covers all
// active features.
inline std::int32_t min_model_size(const ReplicationRecord& rec) {
    if (rec.active.empty()) throw std::invalid_argument("empty active set");
    const std::int32_t p = static_cast<std::int32_t>(rec.omega_order.size());
    std::vector<std::int32_t> position(p, -1);
    for (std::int32_t pos = 0; pos < p; ++pos) position[rec.omega_order[pos]] = pos + 1;
    std::int32_t s = 0;
    for (std::int32_t j : rec.active) {
        if (j < 0 || j >= p || position[j] < 0)
            throw std::invalid_argument("active index absent from ranking");
        s = std::max(s, position[j]);
    }
    return s;
}

// Inverse-ECDF (type 1) sample quantile: the order statistic at index
// ceil(q*N), 1-based. Fixed so tables are bit-reproducible.
inline double quantile(std::span<const double> values, double q) {
    if (values.empty()) throw std::invalid_argument("empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level outside [0,1]");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double scaled = q * static_cast<double>(sorted.size());
    // tiny slack so q*N that is an integer in exact arithmetic stays one
    const std::int64_t k = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(scaled - 1e-9)));
    return sorted[static_cast<std::size_t>(k - 1)];
}

inline double interquartile_range(std::span<const double> values) {
    return quantile(values, 0.75) - quantile(values, 0.25);
}

struct SelectionProportions {
    std::vector<double> p_j; // per active feature, in active-set order
    double p_a = 0.0;        // all active features simultaneously
};

// P_j(d): fraction of replications ranking feature j within the top d.
// P_a(d): fraction where the whole active set fits, equivalently S <= d.
inline SelectionProportions selection_proportions(std::span<const ReplicationRecord> records,
                                                  std::int32_t d) {
    if (records.empty()) throw std::invalid_argument("empty record list");
    if (d < 1) throw std::invalid_argument("model size must be positive");
    const auto& active = records.front().active;
    if (active.empty()) throw std::invalid_argument("empty active set");

    SelectionProportions out;
    out.p_j.assign(active.size(), 0.0);
    std::size_t all_in = 0;
    for (const ReplicationRecord& rec : records) {
        if (rec.active != active) throw std::invalid_argument("inconsistent active sets");
        const std::int32_t p = static_cast<std::int32_t>(rec.omega_order.size());
        std::vector<std::int32_t> position(p, p + 1);
        for (std::int32_t pos = 0; pos < p; ++pos) position[rec.omega_order[pos]] = pos + 1;
        bool all = true;
        for (std::size_t a = 0; a < active.size(); ++a) {
            const std::int32_t j = active[a];
            if (j < 0 || j >= p) throw std::invalid_argument("active index absent from ranking");
            const bool in = position[j] <= d;
            out.p_j[a] += in ? 1.0 : 0.0;
            all = all && in;
        }
        all_in += all ? 1 : 0;
    }
    for (double& v : out.p_j) v /= static_cast<double>(records.size());
    out.p_a = static_cast<double>(all_in) / static_cast<double>(records.size());
    return out;
}

// Harrell-style concordance over usable pairs: (i, j) is comparable when
// y_i < y_j and subject i's event was observed; the pair is concordant when
// the earlier failure carries the higher risk score, tied scores count 1/2.
inline double concordance_index(std::span<const double> risk, const SurvivalResponse& resp) {
    resp.validate();
    if (risk.size() != resp.size()) throw std::invalid_argument("length mismatch");
    const std::size_t n = resp.size();

    std::vector<std::int32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::int32_t a, std::int32_t b) { return resp.y[a] < resp.y[b]; });

    double concordant = 0.0;
    std::int64_t comparable = 0;
    std::size_t block = 0;
    while (block < n) {
        std::size_t block_end = block;
        while (block_end < n && resp.y[order[block_end]] == resp.y[order[block]]) ++block_end;
        for (std::size_t a = block; a < block_end; ++a) {
            const std::int32_t i = order[a];
            if (!resp.delta[i]) continue;
            for (std::size_t b = block_end; b < n; ++b) {
                const std::int32_t j = order[b];
                ++comparable;
                if (risk[i] > risk[j]) concordant += 1.0;
                else if (risk[i] == risk[j]) concordant += 0.5;
            }
        }
        block = block_end;
    }
    if (comparable == 0) throw std::runtime_error("no comparable pairs");
    return concordant / static_cast<double>(comparable);
}

} // namespace ximsis

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ximsis/matrix.hpp"
#include "ximsis/parallel.hpp"
#include "ximsis/survival.hpp"
#include "ximsis/xi.hpp"

namespace ximsis {

// How the neighbor count M is chosen: a fixed value, or c*sqrt(n) rounded
// (M grows like sqrt(n); the three canonical variants are floor(sqrt(n))-1,
// floor(sqrt(n)), floor(sqrt(n))+1 and live in experiment.hpp).
struct MRule {
    enum class Kind { Fixed, Auto };
    Kind kind = Kind::Auto;
    std::int32_t fixed_m = 0;
    double multiplier = 1.0;

    static MRule fixed(std::int32_t m) { return {Kind::Fixed, m, 0.0}; }
    static MRule automatic(double c = 1.0) { return {Kind::Auto, 0, c}; }

    std::int32_t resolve(std::int32_t n) const {
        std::int32_t m = kind == Kind::Fixed
                             ? fixed_m
                             : std::max<std::int32_t>(
                                   1, static_cast<std::int32_t>(std::lround(
                                          multiplier * std::sqrt(static_cast<double>(n)))));
        if (m < 1 || m > n) throw std::invalid_argument("invalid neighbor count");
        return m;
    }
};

struct ScreeningConfig {
    MRule m_rule = MRule::automatic();

    enum class Selection { TopD, Threshold };
    Selection selection = Selection::TopD;
    std::int32_t top_d = 0;     // Selection::TopD
    double threshold = 0.0;     // Selection::Threshold

    std::uint64_t tie_seed = 0;
    int workers = 0;            // 0 = XIMSIS_WORKERS env or hardware
};

struct ScreeningResult {
    std::vector<double> omega;          // omega_hat per feature
    std::vector<std::int32_t> order;    // features sorted by omega desc, ties by index
    std::vector<std::int32_t> selected; // prefix of order (top-d) or threshold set
    std::int32_t m_used = 0;
    std::vector<std::uint8_t> degenerate; // 1 where a constant feature was zeroed
    std::vector<std::string> warnings;

    friend bool operator==(const ScreeningResult& a, const ScreeningResult& b) = default;
};

namespace detail {

// Ranks of the Kaplan-Meier values S(y_i), plateau ties broken at random.
// The survival curve is plugged in exactly as estimated; since xi only sees
// ranks, this matches feeding S(T) itself into the correlation.
inline RankedColumn km_plugin_ranks(const SurvivalResponse& resp, std::uint64_t seed) {
    const KmCurve km = km_survival(resp);
    if (is_constant(km.values)) throw std::invalid_argument("degenerate survival curve");
    return rank_vector(km.values, seed);
}

inline double symmetrized_xi(const RankedColumn& feature, const RankedColumn& response,
                             std::int32_t m) {
    return std::max(xi_from_ranks(feature, response, m), xi_from_ranks(response, feature, m));
}

} // namespace detail

// The XIM-SIS marginal utility of one feature:
//
//   omega_hat = max{ xi(F_k(X_k), S(Y)),  xi(S(Y), F_k(X_k)) }
//
// with the empirical CDF entering through tie-broken ranks of x_k and the
// Kaplan-Meier estimate through tie-broken ranks of its values. A constant
// feature has no rank information; it yields 0 with the degenerate flag set.
inline double omega_hat(std::span<const double> xk, const SurvivalResponse& resp, std::int32_t m,
                        std::uint64_t tie_seed, bool* degenerate = nullptr) {
    if (xk.size() != resp.size()) throw std::invalid_argument("dimension mismatch");
    if (degenerate) *degenerate = false;
    const RankedColumn response = detail::km_plugin_ranks(resp, derive_seed(tie_seed, 1));
    if (detail::is_constant(xk)) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    const RankedColumn feature = rank_vector(xk, derive_seed(tie_seed, 0));
    return detail::symmetrized_xi(feature, response, m);
}

// Screens all p columns of X against the censored response. The response
// ranks and M are computed once and shared read-only; each column is ranked
// with seed tie_seed XOR column index and written to its own slot, so the
// result is bit-identical for any worker count.
inline ScreeningResult screen(const Matrix& x, const SurvivalResponse& resp,
                              const ScreeningConfig& cfg) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    if (n != resp.size()) throw std::invalid_argument("dimension mismatch");
    if (p < 1) throw std::invalid_argument("empty column");

    ScreeningResult result;
    result.m_used = cfg.m_rule.resolve(static_cast<std::int32_t>(n));
    result.omega.resize(p);
    result.degenerate.assign(p, 0);

    const RankedColumn response =
        detail::km_plugin_ranks(resp, derive_seed(cfg.tie_seed, 1));

    parallel_for(p, cfg.workers, [&](std::size_t k) {
        const auto column = x.col(k);
        if (detail::is_constant(column)) {
            result.omega[k] = 0.0;
            result.degenerate[k] = 1;
            return;
        }
        const std::uint64_t column_seed = cfg.tie_seed ^ static_cast<std::uint64_t>(k);
        const RankedColumn feature = rank_vector(column, derive_seed(column_seed, 0));
        result.omega[k] = detail::symmetrized_xi(feature, response, result.m_used);
    });

    for (std::size_t k = 0; k < p; ++k)
        if (result.degenerate[k])
            result.warnings.push_back("feature " + std::to_string(k + 1) +
                                      " is constant; omega set to 0");

    result.order.resize(p);
    std::iota(result.order.begin(), result.order.end(), 0);
    std::stable_sort(result.order.begin(), result.order.end(),
                     [&](std::int32_t a, std::int32_t b) { return result.omega[a] > result.omega[b]; });

    if (cfg.selection == ScreeningConfig::Selection::TopD) {
        std::int64_t d = cfg.top_d;
        if (d < 1 || d > static_cast<std::int64_t>(p)) {
            result.warnings.push_back("model size " + std::to_string(d) + " clamped to " +
                                      std::to_string(p));
            d = static_cast<std::int64_t>(p);
        }
        result.selected.assign(result.order.begin(), result.order.begin() + d);
    } else {
        for (std::int32_t k : result.order) {
            if (result.omega[k] < cfg.threshold) break;
            result.selected.push_back(k);
        }
    }
    return result;
}

struct ModelSizes {
    std::int32_t d1 = 0; // ceil(n / ln n)
    std::int32_t d2 = 0; // n - 1
};

inline ModelSizes default_model_sizes(std::int32_t n) {
    if (n < 3) throw std::invalid_argument("degenerate sample");
    return {static_cast<std::int32_t>(std::ceil(n / std::log(static_cast<double>(n)))), n - 1};
}

} // namespace ximsis

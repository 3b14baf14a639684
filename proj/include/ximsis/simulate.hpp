#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ximsis/matrix.hpp"
#include "ximsis/rng.hpp"
#include "ximsis/survival.hpp"

namespace ximsis {

enum class ModelFamily { Cox, Transformation, Aft, NonlinearExp };
enum class CovarianceKind { Ar1, CompoundSymmetry };

inline const char* model_name(ModelFamily m) {
    switch (m) {
        case ModelFamily::Cox: return "cox";
        case ModelFamily::Transformation: return "transformation";
        case ModelFamily::Aft: return "aft";
        case ModelFamily::NonlinearExp: return "nonlinear";
    }
    return "?";
}

// Full generative description of one benchmark design. `beta` is sparse
// (0-based column, coefficient) and drives Cox / Transformation; the AFT and
// nonlinear designs have their effects baked into the formula with active
// columns {1,2,7} (1-based).
struct SimScenario {
    ModelFamily model = ModelFamily::Cox;
    std::int32_t n = 0;
    std::int32_t p = 0;
    CovarianceKind covariance = CovarianceKind::Ar1;
    double rho = 0.0;
    double target_cr = 0.3;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::int32_t, double>> beta;
    double baseline_hazard = 0.5;

    std::vector<std::int32_t> active_set() const {
        std::vector<std::int32_t> active;
        if (model == ModelFamily::Aft || model == ModelFamily::NonlinearExp) {
            active = {0, 1, 6};
        } else {
            for (const auto& [idx, coef] : beta)
                if (coef != 0.0) active.push_back(idx);
            std::sort(active.begin(), active.end());
        }
        return active;
    }

    std::int32_t min_columns() const {
        std::int32_t need = 1;
        for (std::int32_t a : active_set()) need = std::max(need, a + 1);
        return need;
    }

    void validate() const {
        if (n < 2 || p < 1) throw std::invalid_argument("degenerate sample");
        if (!(target_cr > 0.0 && target_cr < 1.0))
            throw std::invalid_argument("target censoring rate must lie in (0,1)");
        if (covariance == CovarianceKind::Ar1 && !(rho > -1.0 && rho < 1.0))
            throw std::invalid_argument("invalid correlation parameter");
        if (covariance == CovarianceKind::CompoundSymmetry && !(rho >= 0.0 && rho < 1.0))
            throw std::invalid_argument("invalid correlation parameter");
        if (p < min_columns()) throw std::invalid_argument("dimension too small for model");
        for (const auto& [idx, coef] : beta)
            if (idx < 0 || idx >= p) throw std::invalid_argument("beta index out of range");
    }
};

struct GeneratedSample {
    Matrix x;
    std::vector<double> t_true;
    SurvivalResponse resp;
    double c_upper = 0.0;

    friend bool operator==(const GeneratedSample& a, const GeneratedSample& b) = default;
};

// N(0, Sigma) rows without materialising Sigma. AR(1) uses the stationary
// recursion X_1 = Z_1, X_j = rho X_{j-1} + sqrt(1-rho^2) Z_j, which gives
// Cov = rho^{|i-j|} exactly; compound symmetry shares one W per row. Draws
// are consumed column by column, so the leading columns of a (n, p) draw and
// a (n, p') draw from the same generator state coincide.
inline Matrix sample_covariates(std::int32_t n, std::int32_t p, CovarianceKind kind, double rho,
                                Rng& rng) {
    if (kind == CovarianceKind::Ar1 && !(rho > -1.0 && rho < 1.0))
        throw std::invalid_argument("invalid correlation parameter");
    if (kind == CovarianceKind::CompoundSymmetry && !(rho >= 0.0 && rho < 1.0))
        throw std::invalid_argument("invalid correlation parameter");

    Matrix x(static_cast<std::size_t>(n), static_cast<std::size_t>(p));
    if (kind == CovarianceKind::Ar1) {
        const double scale = std::sqrt(1.0 - rho * rho);
        for (std::int32_t i = 0; i < n; ++i) x(i, 0) = rng.normal();
        for (std::int32_t j = 1; j < p; ++j)
            for (std::int32_t i = 0; i < n; ++i) x(i, j) = rho * x(i, j - 1) + scale * rng.normal();
    } else {
        std::vector<double> shared(n);
        for (double& w : shared) w = rng.normal();
        const double sr = std::sqrt(rho);
        const double sz = std::sqrt(1.0 - rho);
        for (std::int32_t j = 0; j < p; ++j)
            for (std::int32_t i = 0; i < n; ++i) x(i, j) = sr * shared[i] + sz * rng.normal();
    }
    return x;
}

namespace detail {

inline double sparse_dot(const Matrix& x, std::int32_t row,
                         std::span<const std::pair<std::int32_t, double>> beta) {
    double acc = 0.0;
    for (const auto& [idx, coef] : beta) acc += coef * x(row, idx);
    return acc;
}

} // namespace detail

// Inverse-transform draw for the proportional hazards design with constant
// baseline hazard: T = -log(u) / (h0 exp(x'beta)).
inline double cox_event_time(double u, double linear_predictor, double baseline_hazard) {
    return -std::log(u) / (baseline_hazard * std::exp(linear_predictor));
}

// H(t) = log(0.5 (exp(2t) - 1)) and its inverse, kept stable for |h| in the
// hundreds (the Cauchy error term reaches that far).
inline double transformation_h(double t) { return std::log(0.5 * (std::exp(2.0 * t) - 1.0)); }

inline double transformation_h_inv(double h) {
    if (h > 0.0) return 0.5 * (h + std::log(2.0) + std::log1p(0.5 * std::exp(-h)));
    // the deep left tail underflows exp(); keep the event time positive
    return std::max(0.5 * std::log1p(2.0 * std::exp(h)), std::numeric_limits<double>::min());
}

inline double aft_log_time(double x1, double x2, double x7, double eps) {
    return x1 + 0.8 * x2 + x7 * x7 + eps;
}

inline double nonlinear_log_time(double x1, double x2, double x7, double eps) {
    return 1.5 - std::exp(-x1 - 0.8 * x2 - x7) * eps;
}

inline std::vector<double> cox_event_times(const Matrix& x,
                                           std::span<const std::pair<std::int32_t, double>> beta,
                                           double baseline_hazard, Rng& rng) {
    std::vector<double> t(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i)
        t[i] = cox_event_time(rng.uniform_open01(),
                              detail::sparse_dot(x, static_cast<std::int32_t>(i), beta),
                              baseline_hazard);
    return t;
}

inline std::vector<double>
transformation_event_times(const Matrix& x, std::span<const std::pair<std::int32_t, double>> beta,
                           Rng& rng) {
    std::vector<double> t(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i)
        t[i] = transformation_h_inv(
            -detail::sparse_dot(x, static_cast<std::int32_t>(i), beta) + rng.cauchy());
    return t;
}

inline std::vector<double> aft_event_times(const Matrix& x, Rng& rng) {
    if (x.cols() < 7) throw std::invalid_argument("dimension too small for model");
    std::vector<double> t(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i)
        t[i] = std::exp(aft_log_time(x(i, 0), x(i, 1), x(i, 6), rng.normal()));
    return t;
}

inline std::vector<double> nonlinear_event_times(const Matrix& x, Rng& rng) {
    if (x.cols() < 7) throw std::invalid_argument("dimension too small for model");
    std::vector<double> t(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i)
        t[i] = std::exp(nonlinear_log_time(x(i, 0), x(i, 1), x(i, 6), rng.normal()));
    return t;
}

namespace detail {

inline std::vector<double> latent_times(const SimScenario& sc, const Matrix& x, Rng& rng) {
    switch (sc.model) {
        case ModelFamily::Cox: return cox_event_times(x, sc.beta, sc.baseline_hazard, rng);
        case ModelFamily::Transformation: return transformation_event_times(x, sc.beta, rng);
        case ModelFamily::Aft: return aft_event_times(x, rng);
        case ModelFamily::NonlinearExp: return nonlinear_event_times(x, rng);
    }
    throw std::logic_error("unreachable");
}

// rng stream ids within a scenario seed
constexpr std::uint64_t kCovariateStream = 0x11;
constexpr std::uint64_t kLatentStream = 0x12;
constexpr std::uint64_t kCensoringStream = 0x13;
constexpr std::uint64_t kPilotStream = 0x14;

} // namespace detail

// Solves mean(min(T_i, c)) / c = target for c on a frozen pilot sample of
// latent event times. The estimate of P(T > C) under C ~ Unif(0, c) given T
// is min(T, c)/c; the map c -> CR is continuous and decreasing, so geometric
// bracket expansion followed by bisection lands within tol.
inline double calibrate_censoring_bound(std::span<const double> t_pilot, double target_cr,
                                        double tol = 0.005) {
    if (t_pilot.empty()) throw std::invalid_argument("empty column");
    if (!(target_cr > 0.0 && target_cr < 1.0))
        throw std::invalid_argument("target censoring rate must lie in (0,1)");
    const auto cr = [&](double c) {
        double acc = 0.0;
        for (double t : t_pilot) acc += std::min(t, c);
        return acc / (c * static_cast<double>(t_pilot.size()));
    };
    double lo = 1e-3, hi = 1e3;
    for (int k = 0; cr(hi) > target_cr; ++k) {
        if (k >= 60) throw std::runtime_error("target CR unattainable");
        hi *= 2.0;
    }
    for (int k = 0; cr(lo) < target_cr; ++k) {
        if (k >= 60) throw std::runtime_error("target CR unattainable");
        lo *= 0.5;
    }
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double value = cr(mid);
        if (std::abs(value - target_cr) <= tol) return mid;
        (value > target_cr ? lo : hi) = mid;
    }
    return mid;
}

// Pilot draw + solve. Only the leading columns a model actually reads are
// generated, which is distribution-exact because covariate draws are consumed
// column by column.
inline double calibrate_censoring(const SimScenario& sc, double tol = 0.005,
                                  std::int32_t pilot_n = 200000) {
    sc.validate();
    Rng rng(derive_seed(sc.seed, detail::kPilotStream));
    const Matrix x = sample_covariates(pilot_n, sc.min_columns(), sc.covariance, sc.rho, rng);
    const std::vector<double> t = detail::latent_times(sc, x, rng);
    return calibrate_censoring_bound(t, sc.target_cr, tol);
}

// Assembles one replication: covariates, latent times, Unif(0, c) censoring,
// observed (Y, Delta). Fully determined by (scenario, c_upper).
inline GeneratedSample generate_sample(const SimScenario& sc, double c_upper) {
    sc.validate();
    if (!(c_upper > 0.0)) throw std::invalid_argument("censoring bound must be positive");
    GeneratedSample out;
    out.c_upper = c_upper;
    {
        Rng rng(derive_seed(sc.seed, detail::kCovariateStream));
        out.x = sample_covariates(sc.n, sc.p, sc.covariance, sc.rho, rng);
    }
    {
        Rng rng(derive_seed(sc.seed, detail::kLatentStream));
        out.t_true = detail::latent_times(sc, out.x, rng);
    }
    Rng rng(derive_seed(sc.seed, detail::kCensoringStream));
    out.resp.y.resize(sc.n);
    out.resp.delta.resize(sc.n);
    for (std::int32_t i = 0; i < sc.n; ++i) {
        const double c = c_upper * rng.uniform_open01();
        out.resp.y[i] = std::min(out.t_true[i], c);
        out.resp.delta[i] = out.t_true[i] <= c ? 1 : 0;
    }
    return out;
}

// Convenience overload: calibrates the censoring bound from the scenario's
// own seed, then generates.
inline GeneratedSample generate_sample(const SimScenario& sc) {
    return generate_sample(sc, calibrate_censoring(sc));
}

// The four benchmark designs.
inline SimScenario example1_scenario(std::int32_t n, double cr, std::uint64_t seed,
                                     std::int32_t p = 2000) {
    SimScenario sc;
    sc.model = ModelFamily::Cox;
    sc.n = n;
    sc.p = p;
    sc.covariance = CovarianceKind::Ar1;
    sc.rho = 0.6;
    sc.target_cr = cr;
    sc.seed = seed;
    sc.baseline_hazard = 0.5;
    for (std::int32_t j = 0; j < 5; ++j) sc.beta.emplace_back(j, 0.35);
    return sc;
}

inline SimScenario example2_scenario(std::int32_t n, double cr, std::uint64_t seed,
                                     std::int32_t p = 2000) {
    SimScenario sc;
    sc.model = ModelFamily::Transformation;
    sc.n = n;
    sc.p = p;
    sc.covariance = CovarianceKind::Ar1;
    sc.rho = 0.5;
    sc.target_cr = cr;
    sc.seed = seed;
    sc.beta = {{0, -1.0}, {1, -0.9}, {8, 0.8}, {9, 1.0}};
    return sc;
}

inline SimScenario example3_scenario(std::int32_t n, double cr, std::uint64_t seed,
                                     std::int32_t p = 2000) {
    SimScenario sc;
    sc.model = ModelFamily::Aft;
    sc.n = n;
    sc.p = p;
    sc.covariance = CovarianceKind::Ar1;
    sc.rho = 0.6;
    sc.target_cr = cr;
    sc.seed = seed;
    return sc;
}

inline SimScenario example4_scenario(std::int32_t n, double cr, std::uint64_t seed,
                                     std::int32_t p = 2000) {
    SimScenario sc;
    sc.model = ModelFamily::NonlinearExp;
    sc.n = n;
    sc.p = p;
    sc.covariance = CovarianceKind::CompoundSymmetry;
    sc.rho = 0.5;
    sc.target_cr = cr;
    sc.seed = seed;
    return sc;
}

} // namespace ximsis

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace ximsis {

// Right-censored response: y_i = min(T_i, C_i), delta_i = 1(T_i <= C_i).
struct SurvivalResponse {
    std::vector<double> y;
    std::vector<std::uint8_t> delta;

    std::size_t size() const noexcept { return y.size(); }

    friend bool operator==(const SurvivalResponse&, const SurvivalResponse&) = default;

    void validate() const {
        if (y.size() != delta.size()) throw std::invalid_argument("length mismatch");
        if (y.size() < 2) throw std::invalid_argument("degenerate sample");
        for (std::uint8_t d : delta)
            if (d > 1) throw std::invalid_argument("status must be 0/1");
    }
};

// Product-limit curve evaluated at the observed times: values[i] = S(y_i).
struct KmCurve {
    std::vector<double> values;
};

namespace detail {

// Running product of (r-d)/r factors kept as an exact reduced fraction while
// it fits; beyond 2^53 the state degrades to a plain double product. The
// exact branch makes the no-censoring curve equal (n-k)/n to the last bit.
struct KmProduct {
    std::uint64_t num = 1;
    std::uint64_t den = 1;
    bool exact = true;
    double approx = 1.0;

    void multiply(std::uint64_t a, std::uint64_t b) { // by a/b, a <= b
        if (exact) {
            const std::uint64_t g1 = std::gcd(num, b);
            num /= g1, b /= g1;
            const std::uint64_t g2 = std::gcd(a, den);
            den /= g2, a /= g2;
            constexpr std::uint64_t limit = 1ULL << 53;
            if (num <= limit / (a ? a : 1) && den <= limit / b) {
                num *= a;
                den *= b;
                return;
            }
            exact = false;
            approx = static_cast<double>(num) / static_cast<double>(den);
        }
        approx *= static_cast<double>(a) / static_cast<double>(b);
    }

    double value() const noexcept {
        return exact ? static_cast<double>(num) / static_cast<double>(den) : approx;
    }
};

} // namespace detail

// Kaplan-Meier estimate S(t) = prod_{event times tau <= t} (1 - d_tau/r_tau),
// evaluated at every observed y_i. Tied observed times share one risk set;
// censored observations contribute no factor.
inline KmCurve km_survival(const SurvivalResponse& resp) {
    resp.validate();
    const std::size_t n = resp.size();
    if (std::find(resp.delta.begin(), resp.delta.end(), std::uint8_t{1}) == resp.delta.end())
        throw std::invalid_argument("no events");

    std::vector<std::int32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::int32_t a, std::int32_t b) { return resp.y[a] < resp.y[b]; });

    KmCurve curve;
    curve.values.resize(n);
    detail::KmProduct prod;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        std::uint64_t events = 0;
        while (j < n && resp.y[order[j]] == resp.y[order[i]]) events += resp.delta[order[j++]];
        const std::uint64_t at_risk = n - i;
        if (events > 0) prod.multiply(at_risk - events, at_risk);
        const double s = prod.value();
        for (std::size_t k = i; k < j; ++k) curve.values[order[k]] = s;
        i = j;
    }
    return curve;
}

// Fraction of censored subjects, (1/n) sum (1 - delta_i).
inline double censoring_rate(const SurvivalResponse& resp) {
    if (resp.y.empty() || resp.y.size() != resp.delta.size())
        throw std::invalid_argument("empty column");
    std::size_t censored = 0;
    for (std::uint8_t d : resp.delta) censored += (d == 0);
    return static_cast<double>(censored) / static_cast<double>(resp.size());
}

} // namespace ximsis

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "ximsis/rng.hpp"
#include "ximsis/survival.hpp"

using ximsis::censoring_rate;
using ximsis::km_survival;
using ximsis::SurvivalResponse;

TEST_CASE("km equals 1 - ECDF under full follow-up") {
    const SurvivalResponse resp{{1, 2, 3, 4}, {1, 1, 1, 1}};
    const auto curve = km_survival(resp);
    CHECK(curve.values == std::vector<double>{0.75, 0.5, 0.25, 0.0});

    // exact (n-k)/n at every order statistic, including the non-dyadic ones
    const SurvivalResponse resp7{{7, 1, 4, 2, 6, 3, 5}, {1, 1, 1, 1, 1, 1, 1}};
    const auto curve7 = km_survival(resp7);
    for (std::size_t i = 0; i < 7; ++i) {
        const double k = resp7.y[i]; // value == order-statistic index here
        CHECK(curve7.values[i] == (7.0 - k) / 7.0);
    }
}

TEST_CASE("km hand case with censoring") {
    const SurvivalResponse resp{{1, 2, 3}, {1, 0, 1}};
    const auto curve = km_survival(resp);
    CHECK(curve.values[0] == 2.0 / 3.0);
    CHECK(curve.values[1] == 2.0 / 3.0); // censored time carries no factor
    CHECK(curve.values[2] == 0.0);
}

TEST_CASE("km tied times share one risk set") {
    // two events at t=1 drop the curve to 1/3 in one step
    const auto tied = km_survival({{1, 1, 2}, {1, 1, 1}});
    CHECK(tied.values == std::vector<double>{1.0 / 3.0, 1.0 / 3.0, 0.0});
    // event and censoring at the same time: both sit in the risk set
    const auto mixed = km_survival({{1, 1, 2}, {1, 0, 1}});
    CHECK(mixed.values == std::vector<double>{2.0 / 3.0, 2.0 / 3.0, 0.0});
}

TEST_CASE("km rejects degenerate input") {
    CHECK_THROWS_WITH(km_survival({{1, 2, 3}, {0, 0, 0}}), "no events");
    CHECK_THROWS_WITH(km_survival({{1}, {1}}), "degenerate sample");
    CHECK_THROWS_WITH(km_survival({{1, 2}, {1}}), "length mismatch");
    CHECK_THROWS_WITH(km_survival({{1, 2}, {1, 2}}), "status must be 0/1");
}

TEST_CASE("km matches the textbook product over event times") {
    ximsis::Rng rng(100);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 50;
        SurvivalResponse resp;
        resp.y.resize(n);
        resp.delta.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            resp.y[i] = -std::log(rng.uniform_open01());
            resp.delta[i] = rng.uniform01() < 0.7 ? 1 : 0;
        }
        if (censoring_rate(resp) == 1.0) resp.delta[0] = 1;
        const auto curve = km_survival(resp);
        const auto expected = oracles::km_by_definition(resp);
        for (std::size_t i = 0; i < n; ++i)
            CHECK_THAT(curve.values[i], Catch::Matchers::WithinAbs(expected[i], 1e-12));
    }
}

TEST_CASE("km stays accurate after the exact fraction overflows") {
    // n=500 with mixed censoring pushes the running product past 2^53, so
    // this covers the double fallback against the definitional sweep
    ximsis::Rng rng(202);
    SurvivalResponse resp;
    for (int i = 0; i < 500; ++i) {
        resp.y.push_back(-std::log(rng.uniform_open01()));
        resp.delta.push_back(rng.uniform01() < 0.65 ? 1 : 0);
    }
    resp.delta[0] = 1;
    const auto curve = km_survival(resp);
    const auto expected = oracles::km_by_definition(resp);
    for (std::size_t i = 0; i < resp.size(); ++i)
        CHECK_THAT(curve.values[i], Catch::Matchers::WithinAbs(expected[i], 1e-12));
}

TEST_CASE("km is nonincreasing in time") {
    ximsis::Rng rng(101);
    SurvivalResponse resp;
    for (int i = 0; i < 80; ++i) {
        resp.y.push_back(1.0 + rng.below(20)); // heavy ties
        resp.delta.push_back(rng.uniform01() < 0.6 ? 1 : 0);
    }
    resp.delta[0] = 1;
    const auto curve = km_survival(resp);
    std::vector<std::size_t> order(resp.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return resp.y[a] < resp.y[b]; });
    for (std::size_t k = 1; k < order.size(); ++k) {
        CHECK(curve.values[order[k]] <= curve.values[order[k - 1]]);
        CHECK(curve.values[order[k]] >= 0.0);
        CHECK(curve.values[order[k]] <= 1.0);
    }
}

TEST_CASE("censoring_rate counts zeros") {
    CHECK(censoring_rate({{1, 1, 1, 1}, {1, 1, 1, 1}}) == 0.0);
    CHECK(censoring_rate({{1, 1, 1, 1}, {0, 0, 0, 0}}) == 1.0);
    CHECK(censoring_rate({{1, 1, 1, 1}, {1, 0, 1, 0}}) == 0.5);
    CHECK_THROWS_WITH(censoring_rate({{}, {}}), "empty column");
}

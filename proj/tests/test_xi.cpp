#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "ximsis/xi.hpp"

using ximsis::revised_xi;
using ximsis::xi_decompose;
using ximsis::XiDecomposition;

TEST_CASE("perfect monotone dependence at n=5, M=1 gives 8/11 exactly") {
    const std::vector<double> u{0.1, 0.7, 1.3, 2.0, 5.5};
    std::vector<double> v;
    for (double x : u) v.push_back(std::exp(x)); // any strictly increasing map
    CHECK(revised_xi(u, v, 1, 0) == 8.0 / 11.0);
    CHECK(revised_xi(u, u, 1, 42) == 8.0 / 11.0);
}

TEST_CASE("revised_xi validates its inputs") {
    const std::vector<double> u{1, 2, 3};
    CHECK_THROWS_WITH(revised_xi(u, std::vector<double>{1, 2}, 1, 0), "length mismatch");
    CHECK_THROWS_WITH(revised_xi(std::vector<double>{1}, std::vector<double>{1}, 1, 0),
                      "degenerate sample");
    CHECK_THROWS_WITH(revised_xi(u, u, 4, 0), "invalid neighbor count");
    CHECK_THROWS_WITH(revised_xi(u, std::vector<double>{2, 2, 2}, 1, 0), "constant column");
}

TEST_CASE("revised_xi equals the definitional formula on random instances") {
    ximsis::Rng rng(7);
    const std::vector<double> u = oracles::distinct_sample(10, rng);
    const std::vector<double> v = oracles::distinct_sample(10, rng);
    CHECK_THAT(revised_xi(u, v, 3, 0),
               Catch::Matchers::WithinAbs(oracles::xi_by_definition(u, v, 3), 1e-12));

    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng.below(11);
        const std::int32_t m = 1 + static_cast<std::int32_t>(rng.below(n));
        const std::vector<double> a = oracles::distinct_sample(n, rng);
        const std::vector<double> b = oracles::distinct_sample(n, rng);
        CHECK_THAT(revised_xi(a, b, m, 0),
                   Catch::Matchers::WithinAbs(oracles::xi_by_definition(a, b, m), 1e-12));
    }
}

TEST_CASE("monotone transforms leave xi bit-identical") {
    ximsis::Rng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 3 + rng.below(30);
        std::vector<double> u(n), v(n);
        for (double& x : u) x = static_cast<double>(rng.below(6)); // with ties
        for (double& x : v) x = rng.normal();
        std::vector<double> gu(n), hv(n);
        for (std::size_t i = 0; i < n; ++i) {
            gu[i] = std::exp(u[i]);                  // strictly increasing
            hv[i] = v[i] * v[i] * v[i] + 2.0 * v[i]; // strictly increasing
        }
        const std::uint64_t seed = rng.next_u64();
        const double base = revised_xi(u, v, 2, seed);
        CHECK(revised_xi(gu, hv, 2, seed) == base);
    }
}

TEST_CASE("xi never exceeds the perfect-dependence value for the same (n, M)") {
    ximsis::Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(40);
        const std::int32_t m = 1 + static_cast<std::int32_t>(rng.below(n));
        const std::vector<double> u = oracles::distinct_sample(n, rng);
        const std::vector<double> v = oracles::distinct_sample(n, rng);
        CHECK(revised_xi(u, v, m, 1) <= revised_xi(u, u, m, 1));
    }
}

TEST_CASE("independent samples average to zero") {
    // n = 2000, M = floor(sqrt(n)) = 44, mean over 200 seeds
    ximsis::Rng rng(31);
    double acc = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> u(2000), v(2000);
        for (double& x : u) x = rng.normal();
        for (double& x : v) x = rng.normal();
        acc += revised_xi(u, v, 44, rep);
    }
    CHECK(std::abs(acc / 200.0) < 0.02);
}

TEST_CASE("decomposition: U_n closed form, identity, and the 8/11 case") {
    ximsis::Rng rng(23);
    const std::vector<double> v10 = oracles::distinct_sample(10, rng);
    const std::vector<double> u10 = oracles::distinct_sample(10, rng);
    const XiDecomposition d10 = xi_decompose(u10, v10, 2, 0);
    CHECK(d10.u_n == 0.165); // (1 - 1/100)/6 exactly

    const std::vector<double> five{1.5, 2.5, 3.5, 4.5, 5.5};
    const XiDecomposition d5 = xi_decompose(five, five, 1, 0);
    CHECK(d5.xi_nm == 8.0 / 11.0);
    CHECK_THAT(d5.reconstructed_xi(), Catch::Matchers::WithinAbs(8.0 / 11.0, 1e-12));

    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(11);
        const std::int32_t m = 1 + static_cast<std::int32_t>(rng.below(n));
        const std::vector<double> a = oracles::distinct_sample(n, rng);
        const std::vector<double> b = oracles::distinct_sample(n, rng);
        const XiDecomposition dec = xi_decompose(a, b, m, 0);
        CHECK_THAT(dec.reconstructed_xi(), Catch::Matchers::WithinAbs(dec.xi_nm, 1e-12));
        const double n2 = static_cast<double>(n) * static_cast<double>(n);
        CHECK(dec.u_n == (n2 - 1.0) / (6.0 * n2));
    }
}

TEST_CASE("decomposition identity holds under ties too") {
    ximsis::Rng rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 3 + rng.below(12);
        std::vector<double> a(n), b(n);
        for (double& x : a) x = static_cast<double>(rng.below(4));
        for (double& x : b) x = static_cast<double>(rng.below(4));
        bool constant = true;
        for (double x : b) constant = constant && x == b[0];
        if (constant) b[0] += 1.0;
        const XiDecomposition dec = xi_decompose(a, b, 2, rng.next_u64());
        CHECK_THAT(dec.reconstructed_xi(), Catch::Matchers::WithinAbs(dec.xi_nm, 1e-12));
    }
}

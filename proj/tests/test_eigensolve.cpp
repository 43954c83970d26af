#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ocnreg/eigensolve.hpp"
#include "ocnreg/graph.hpp"
#include "ocnreg/weights.hpp"
#include "oracles.hpp"

using ocnreg::Matrix;
using ocnreg::symmetric_eigenvalues;

TEST_CASE("scalar and 2x2 eigenvalues") {
    Matrix a(1, 1);
    a(0, 0) = 3.5;
    REQUIRE(symmetric_eigenvalues(a) == ocnreg::Vec{3.5});

    Matrix b(2, 2);
    b(0, 0) = 2.0; b(0, 1) = 1.0;
    b(1, 0) = 1.0; b(1, 1) = 2.0;
    auto ev = symmetric_eigenvalues(b);
    REQUIRE(ev[0] == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(ev[1] == Catch::Approx(3.0).margin(1e-14));
}

TEST_CASE("diagonal matrices come back sorted") {
    Matrix a(4, 4);
    a(0, 0) = 4.0; a(1, 1) = -1.0; a(2, 2) = 0.5; a(3, 3) = 2.0;
    auto ev = symmetric_eigenvalues(a);
    REQUIRE(ev == ocnreg::Vec{-1.0, 0.5, 2.0, 4.0});
}

TEST_CASE("three-channel averaging matrix has eigenvalues 0, 2/3, 1") {
    Matrix a(3, 3);
    a(0, 0) = 2.0 / 3.0; a(0, 1) = 1.0 / 3.0; a(0, 2) = 0.0;
    a(1, 0) = 1.0 / 3.0; a(1, 1) = 1.0 / 3.0; a(1, 2) = 1.0 / 3.0;
    a(2, 0) = 0.0;       a(2, 1) = 1.0 / 3.0; a(2, 2) = 2.0 / 3.0;
    auto ev = symmetric_eigenvalues(a);
    REQUIRE(ev[0] == Catch::Approx(0.0).margin(1e-13));
    REQUIRE(ev[1] == Catch::Approx(2.0 / 3.0).margin(1e-13));
    REQUIRE(ev[2] == Catch::Approx(1.0).margin(1e-13));
}

TEST_CASE("random symmetric matrices agree with the Jacobi oracle") {
    std::mt19937_64 rng(90210);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 2 + rng() % 7;
        Matrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const double v = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 4.0 - 2.0;
                a(i, j) = v;
                a(j, i) = v;
            }
        auto got = symmetric_eigenvalues(a);
        auto want = oracles::jacobi_eigenvalues(a);
        REQUIRE(got.size() == want.size());
        double trace = 0.0;
        for (std::size_t i = 0; i < n; ++i) trace += a(i, i);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            REQUIRE(got[i] == Catch::Approx(want[i]).margin(1e-10));
            sum += got[i];
        }
        REQUIRE(sum == Catch::Approx(trace).margin(1e-10));
    }
}

TEST_CASE("complete-network averaging spectrum collapses to three values") {
    auto g = ocnreg::ChannelGraph::from_network(ocnreg::JunctionNetwork::complete(22));
    ocnreg::AveragingWeights w(g);
    auto ev = symmetric_eigenvalues(w.dense());
    REQUIRE(ev.size() == 231);

    int n_low = 0, n_mid = 0, n_one = 0;
    for (double v : ev) {
        if (std::fabs(v - (-1.0 / 41.0)) < 1e-9) ++n_low;
        else if (std::fabs(v - 19.0 / 41.0) < 1e-9) ++n_mid;
        else if (std::fabs(v - 1.0) < 1e-9) ++n_one;
    }
    REQUIRE(n_low == 209);
    REQUIRE(n_mid == 21);
    REQUIRE(n_one == 1);
}

TEST_CASE("input checking") {
    Matrix bad(2, 3);
    REQUIRE_THROWS_AS(symmetric_eigenvalues(bad), std::invalid_argument);
    Matrix asym(2, 2);
    asym(0, 1) = 1.0;
    asym(1, 0) = 0.5;
    REQUIRE_THROWS_AS(symmetric_eigenvalues(asym), std::invalid_argument);
}

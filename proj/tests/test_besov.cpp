// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "torus/besov.hpp"
#include "torus/corpus.hpp"
#include "torus/solvers.hpp"

#include <cmath>

using namespace torus;

TEST_CASE("two-block oracle for a single cosine mode")
{
    const TorusGrid g(2, 16);
    const DyadicSymbol phi = build_phi();
    SpectralField u(g);
    u[std::size_t(2 * 16)] = 1.0; //  2 cos(2 x0) split over blocks 0 and 1
    u[std::size_t(14 * 16)] = 1.0;
    const double l2 = std::sqrt(2.0);
    // B^1_{2,1} = sum_j 2^j ||Delta_j u||_2 = phi(2) l2 + 2 phi(1) l2
    const double expect = phi(2.0) * l2 + 2.0 * phi(1.0) * l2;
    CHECK(besov_norm(u, {1.0, 2.0, 1.0}) == doctest::Approx(expect).epsilon(1e-13));
    // r = infinity takes the larger of the two block terms
    const double expect_inf = std::max(phi(2.0) * l2, 2.0 * phi(1.0) * l2);
    CHECK(besov_norm(u, {1.0, 2.0, infinity}) ==
          doctest::Approx(expect_inf).epsilon(1e-13));
}

TEST_CASE("B^0_{2,2} is equivalent to mean-free L2 within sqrt(2)")
{
    const TorusGrid g(2, 32);
    for (int c = 0; c < 20; ++c) {
        SpectralField u = random_scalar(g, 300 + std::uint64_t(c), 10);
        const double ratio = besov_norm(u, {0.0, 2.0, 2.0}) / l2_norm(u);
        CHECK(ratio >= std::sqrt(0.5) - 1e-12);
        CHECK(ratio <= std::sqrt(2.0) + 1e-12);
    }
}

TEST_CASE("ell^r monotonicity in r")
{
    const TorusGrid g(2, 32);
    SpectralField u = random_scalar(g, 31, 10);
    const double b1 = besov_norm(u, {1.0, 2.0, 1.0});
    const double b2 = besov_norm(u, {1.0, 2.0, 2.0});
    const double binf = besov_norm(u, {1.0, 2.0, infinity});
    CHECK(b1 >= b2);
    CHECK(b2 >= binf);
}

TEST_CASE("hybrid norm reduces to the plain norm for equal branches")
{
    const TorusGrid g(2, 32);
    SpectralField u = random_scalar(g, 33, 10);
    const double a = hybrid_norm(u, {1.5, 1.5, 2.0, 2.0});
    const double b = besov_norm(u, {1.5, 2.0, 1.0});
    CHECK(a == doctest::Approx(b).epsilon(1e-13));
    // branch split: low part only sees l <= 0, high part only l > 0
    SpectralField lowmode(g);
    lowmode[std::size_t(1 * 32)] = 1.0; // blocks -1, 0
    lowmode[std::size_t(31 * 32)] = 1.0;
    const double h = hybrid_norm(lowmode, {2.0, -7.0, 2.0, 2.0});
    const double plain = besov_norm(lowmode, {2.0, 2.0, 1.0});
    CHECK(h == doctest::Approx(plain).epsilon(1e-12));
}

TEST_CASE("Sobolev-type equivalence of B^s_{2,2} against the spectral sum")
{
    const TorusGrid g(2, 32);
    const double s = 1.0;
    for (int c = 0; c < 10; ++c) {
        SpectralField u = random_scalar(g, 400 + std::uint64_t(c), 10);
        double acc = 0.0;
        for (std::size_t i = 1; i < g.size(); ++i) {
            const auto k = g.wavevector(i);
            const double k2 = double(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
            acc += std::pow(k2, s) * std::norm(u[i]);
        }
        const double ratio = besov_norm(u, {s, 2.0, 2.0}) / std::sqrt(acc);
        // per-mode overlap weights sum to at most 1 and at least 1/2,
        // with block centers off by at most the annulus width
        CHECK(ratio >= 0.3);
        CHECK(ratio <= 3.0);
    }
}

TEST_CASE("logarithmic interpolation constant stays moderate")
{
    const TorusGrid g(2, 32);
    for (int c = 0; c < 20; ++c) {
        SpectralField u = random_scalar(g, 500 + std::uint64_t(c), 10);
        const double b1 = besov_norm(u, {1.0, 2.0, 1.0});
        const double binf = besov_norm(u, {1.0, 2.0, infinity});
        const double blo = besov_norm(u, {0.0, 2.0, infinity});
        const double bhi = besov_norm(u, {2.0, 2.0, infinity});
        const double rhs = binf * std::log(std::exp(1.0) + (blo + bhi) / binf);
        CHECK(b1 / rhs <= 10.0);
    }
}

TEST_CASE("series validation")
{
    const TorusGrid g(2, 16);
    ScalarSeries s;
    s.push(0.0, zero_field(g));
    CHECK_THROWS_AS(s.push(0.0, zero_field(g)), std::invalid_argument);
    CHECK_THROWS_AS((void)chemin_lerner_norm(s, BesovIndex{1.0, 2.0, 1.0}, 1.0),
                    InsufficientSnapshots);
}

TEST_CASE("Chemin-Lerner norms: Fubini at rho=r=1, Minkowski at rho=inf")
{
    const TorusGrid g(2, 32);
    SpectralField u0 = random_scalar(g, 61, 10);
    ScalarSeries series = heat_solve(u0, nullptr, 1.0, 0.1, 16);
    const BesovIndex idx{1.0, 2.0, 1.0};
    const double tilde1 = chemin_lerner_norm(series, idx, 1.0);
    const double plain1 = time_lp_besov_norm(series, idx, 1.0);
    CHECK(tilde1 == doctest::Approx(plain1).epsilon(1e-10));
    const double tinf = chemin_lerner_norm(series, idx, infinity);
    const double pinf = time_lp_besov_norm(series, idx, infinity);
    CHECK(pinf <= tinf * (1.0 + 1e-12));
}

TEST_CASE("hybrid Chemin-Lerner agrees with the plain one for equal branches")
{
    const TorusGrid g(2, 16);
    SpectralField u0 = random_scalar(g, 62, 5);
    ScalarSeries series = heat_solve(u0, nullptr, 1.0, 0.1, 8);
    const double a =
        hybrid_chemin_lerner_norm(series, HybridIndex{1.0, 1.0, 2.0, 2.0}, 1.0);
    const double b = chemin_lerner_norm(series, BesovIndex{1.0, 2.0, 1.0}, 1.0);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("vector-field norms reduce to component sums in quadrature")
{
    const TorusGrid g(2, 16);
    VectorField u(g);
    u[0] = random_scalar(g, 63, 5);
    // second component zero: vector block norms equal scalar ones
    CHECK(besov_norm(u, {1.0, 2.0, 1.0}) ==
          doctest::Approx(besov_norm(u[0], {1.0, 2.0, 1.0})).epsilon(1e-12));
}

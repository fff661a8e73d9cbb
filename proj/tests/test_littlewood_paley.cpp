// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "torus/corpus.hpp"
#include "torus/littlewood_paley.hpp"

#include <cmath>

using namespace torus;

TEST_CASE("cutoff profile chi")
{
    CHECK(DyadicSymbol::chi(0.0) == 1.0);
    CHECK(DyadicSymbol::chi(0.75) == 1.0);
    CHECK(DyadicSymbol::chi(4.0 / 3.0) == 0.0);
    CHECK(DyadicSymbol::chi(5.0) == 0.0);
    // strictly decreasing in between
    double prev = 1.0;
    for (int i = 1; i <= 20; ++i) {
        const double v = DyadicSymbol::chi(0.75 + i * (4.0 / 3.0 - 0.75) / 21.0);
        CHECK(v < prev);
        CHECK(v > 0.0);
        prev = v;
    }
}

TEST_CASE("phi support and two-scale identities")
{
    const DyadicSymbol phi = build_phi();
    CHECK(phi(0.74) == 0.0);
    CHECK(phi(8.0 / 3.0 + 1e-9) == 0.0);
    CHECK(phi(1.0) > 0.0);
    CHECK(phi(2.0) > 0.0);
    // phi(1) + phi(2) = 1: the mode |k| = 2 is shared by exactly two blocks
    CHECK(phi(1.0) + phi(2.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(phi(2.0) == doctest::Approx(DyadicSymbol::chi(1.0)).epsilon(1e-14));
}

TEST_CASE("partition of unity on 1000 log-spaced radii")
{
    const DyadicSymbol phi = build_phi();
    const TorusGrid g(2, 128);
    const int jmin = dyadic_j_min(g), jmax = dyadic_j_max(g);
    const double lo = 1.0, hi = 64.0 * std::sqrt(2.0);
    double dev = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double rho = lo * std::pow(hi / lo, i / 999.0);
        double sum = 0.0;
        for (int j = jmin; j <= jmax; ++j)
            sum += phi(std::exp2(-j) * rho);
        dev = std::max(dev, std::abs(sum - 1.0));
    }
    CHECK(dev <= 1e-12);
}

TEST_CASE("level range covers the grid")
{
    // j_max = ceil(log2(M/2 sqrt(N))) + 1
    CHECK(dyadic_j_min(TorusGrid(2, 16)) == -1);
    CHECK(dyadic_j_max(TorusGrid(2, 16)) == 5);   // ceil(log2(8 sqrt 2)) + 1
    CHECK(dyadic_j_max(TorusGrid(3, 32)) == 6);   // ceil(log2(16 sqrt 3)) + 1
}

TEST_CASE("single mode splits into the expected two blocks")
{
    const TorusGrid g(2, 16);
    const DyadicSymbol phi = build_phi();
    SpectralField u(g);
    u[std::size_t(2 * 16)] = 1.0; // e^{i 2 x0}
    // |k| = 2 meets blocks j = 0 (phi(2)) and j = 1 (phi(1)) only
    for (int j = dyadic_j_min(g); j <= dyadic_j_max(g); ++j) {
        const double expect = (j == 0) ? phi(2.0) : (j == 1) ? phi(1.0) : 0.0;
        CHECK(std::abs(dyadic_block(u, j)[std::size_t(2 * 16)] - expect) <= 1e-14);
    }
    // S_1 keeps chi(1) of the mode; S_{j_min} only the mean
    CHECK(std::abs(low_freq_cutoff(u, 1)[std::size_t(2 * 16)] -
                   DyadicSymbol::chi(1.0)) <= 1e-14);
    SpectralField withmean(u);
    withmean[0] = 0.5;
    SpectralField smin = low_freq_cutoff(withmean, dyadic_j_min(g));
    CHECK(std::abs(smin[0] - 0.5) <= 1e-14);
    CHECK(std::abs(smin[std::size_t(2 * 16)]) <= 1e-14);
}

TEST_CASE("reconstruction and almost-orthogonality")
{
    const TorusGrid g(2, 32);
    const int jmin = dyadic_j_min(g), jmax = dyadic_j_max(g);
    for (int c = 0; c < 100; ++c) {
        SpectralField u = random_scalar(g, 100 + std::uint64_t(c), 10);
        u[0] = 0.13;
        BlockDecomposition d = decompose(u);
        SpectralField w = constant_field(g, d.mean.real());
        for (int j = d.j_min; j <= d.j_max; ++j)
            w += d.block(j);
        CHECK(l2_norm(w - u) / l2_norm(u) <= 1e-12);
    }
    SpectralField u = random_scalar(g, 5, 10);
    for (int j = jmin; j <= jmax; ++j)
        for (int k = jmin; k <= jmax; ++k)
            if (std::abs(j - k) >= 2)
                CHECK(l2_norm(dyadic_block(dyadic_block(u, k), j)) == 0.0);
}

TEST_CASE("Bernstein ratios stay inside the block annulus")
{
    const TorusGrid g(2, 32);
    for (int c = 0; c < 10; ++c) {
        SpectralField u = random_scalar(g, 200 + std::uint64_t(c), 10);
        const double ref = l2_norm(u);
        for (int j = dyadic_j_min(g); j <= dyadic_j_max(g); ++j) {
            SpectralField b = dyadic_block(u, j);
            const double nb = l2_norm(b);
            if (nb <= 1e-13 * ref)
                continue;
            double grad2 = 0.0;
            for (int d = 0; d < 2; ++d) {
                const double nd = l2_norm(derivative(b, d));
                grad2 += nd * nd;
            }
            const double ratio = std::sqrt(grad2) / nb;
            CHECK(ratio >= 0.75 * std::exp2(j));
            CHECK(ratio <= (8.0 / 3.0) * std::exp2(j));
        }
    }
}

TEST_CASE("low/high frequency split by mode support")
{
    const TorusGrid g(2, 32);
    SpectralField u(g);
    u[std::size_t(1 * 32)] = 1.0;       // |k| = 1: blocks -1, 0 -> BF
    u[std::size_t(31 * 32)] = 1.0;
    u[std::size_t(4 * 32)] = 0.5;       // |k| = 4: blocks 1, 2 -> HF
    u[std::size_t(28 * 32)] = 0.5;
    u[0] = 0.9;                          // mean: carried by neither part
    auto [bf, hf] = split_bf_hf(u);
    CHECK(std::abs(bf[std::size_t(1 * 32)] - 1.0) <= 1e-13);
    CHECK(std::abs(bf[std::size_t(4 * 32)]) <= 1e-13);
    CHECK(std::abs(hf[std::size_t(4 * 32)] - 0.5) <= 1e-13);
    CHECK(std::abs(hf[std::size_t(1 * 32)]) <= 1e-13);
    CHECK(bf[0] == cplx(0.0));
    CHECK(hf[0] == cplx(0.0));
    CHECK(l2_norm(bf + hf + constant_field(g, 0.9) - u) <= 1e-12);
}

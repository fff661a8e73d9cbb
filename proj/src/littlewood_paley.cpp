// SPDX-License-Identifier: Apache-2.0
#include "torus/littlewood_paley.hpp"

#include <cmath>

namespace torus {

namespace {

// e^{-1/t} mollifier ramp, 0 at t<=0, 1 at t>=1, smooth in between
double ramp(double t)
{
    if (t <= 0.0)
        return 0.0;
    if (t >= 1.0)
        return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

} // namespace

double DyadicSymbol::chi(double rho)
{
    if (rho <= 0.75)
        return 1.0;
    if (rho >= 4.0 / 3.0)
        return 0.0;
    return 1.0 - ramp((rho - 0.75) / (4.0 / 3.0 - 0.75));
}

DyadicSymbol build_phi() { return {}; }

int dyadic_j_min(const TorusGrid&) { return -1; }

int dyadic_j_max(const TorusGrid& grid)
{
    const double kmax =
        0.5 * grid.points_per_dim() * std::sqrt(double(grid.dim()));
    return int(std::ceil(std::log2(kmax))) + 1;
}

SpectralField dyadic_block(const SpectralField& u, int j)
{
    const DyadicSymbol phi;
    const double scale = std::exp2(double(-j));
    SpectralField out = apply_radial_multiplier(
        u, [&](double k) { return k > 0.0 ? phi(scale * k) : 0.0; });
    out[0] = 0.0;
    return out;
}

VectorField dyadic_block(const VectorField& u, int j)
{
    VectorField out(u.grid());
    for (int d = 0; d < u.dim(); ++d)
        out[d] = dyadic_block(u[d], j);
    return out;
}

SpectralField low_freq_cutoff(const SpectralField& u, int j)
{
    // S_j = chi(2^{-j}|D|) on the nonzero modes, plus the mean:
    // sum_{k <= j-1} phi(2^-k rho) telescopes to chi(2^{-j} rho).
    const double scale = std::exp2(double(-j));
    SpectralField out = apply_radial_multiplier(
        u, [&](double k) { return k > 0.0 ? DyadicSymbol::chi(scale * k) : 1.0; });
    return out;
}

BlockDecomposition decompose(const SpectralField& u)
{
    BlockDecomposition d;
    d.j_min = dyadic_j_min(u.grid());
    d.j_max = dyadic_j_max(u.grid());
    d.mean = u.mean();
    d.blocks.reserve(std::size_t(d.j_max - d.j_min + 1));
    for (int j = d.j_min; j <= d.j_max; ++j)
        d.blocks.push_back(dyadic_block(u, j));
    return d;
}

std::pair<SpectralField, SpectralField> split_bf_hf(const SpectralField& u,
                                                    int threshold)
{
    // low part = S_{threshold+1} u without the mean; high part = the rest
    SpectralField bf = low_freq_cutoff(u, threshold + 1);
    bf[0] = 0.0;
    SpectralField hf = u - bf;
    hf[0] = 0.0;
    return {std::move(bf), std::move(hf)};
}

std::pair<VectorField, VectorField> split_bf_hf(const VectorField& u, int threshold)
{
    VectorField bf(u.grid()), hf(u.grid());
    for (int d = 0; d < u.dim(); ++d) {
        auto [b, h] = split_bf_hf(u[d], threshold);
        bf[d] = std::move(b);
        hf[d] = std::move(h);
    }
    return {std::move(bf), std::move(hf)};
}

} // namespace torus

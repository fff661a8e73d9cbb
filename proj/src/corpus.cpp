// SPDX-License-Identifier: Apache-2.0
#include "torus/corpus.hpp"

#include <random>

namespace torus {

namespace {

SpectralField raw_scalar(const TorusGrid& g, std::mt19937_64& rng, int kmax)
{
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> samples(g.size());
    for (auto& s : samples)
        s = dist(rng);
    SpectralField u = forward_transform(g, samples);
    u = apply_multiplier(u, [kmax](const std::array<int, 3>& k) {
        const int m = std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])});
        return (m <= kmax && m > 0) ? 1.0 : 0.0;
    });
    return u;
}

} // namespace

SpectralField random_scalar(const TorusGrid& grid, std::uint64_t seed, int kmax,
                            double amplitude)
{
    std::mt19937_64 rng(seed);
    SpectralField u = raw_scalar(grid, rng, kmax);
    const double n = l2_norm(u);
    if (n > 0.0)
        u *= amplitude / n;
    return u;
}

VectorField random_vector(const TorusGrid& grid, std::uint64_t seed, int kmax,
                          double amplitude)
{
    std::mt19937_64 rng(seed);
    VectorField u(grid);
    double n2 = 0.0;
    for (int d = 0; d < grid.dim(); ++d) {
        u[d] = raw_scalar(grid, rng, kmax);
        const double n = l2_norm(u[d]);
        n2 += n * n;
    }
    if (n2 > 0.0)
        u *= amplitude / std::sqrt(n2);
    return u;
}

VectorField solenoidal_part(const VectorField& u)
{
    const TorusGrid& g = u.grid();
    VectorField out(u);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto k = g.wavevector(i);
        const double k2 = double(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
        if (k2 == 0.0)
            continue;
        cplx kdot = 0.0;
        for (int d = 0; d < g.dim(); ++d)
            kdot += double(k[d]) * u[d][i];
        for (int d = 0; d < g.dim(); ++d)
            out[d][i] -= kdot * double(k[d]) / k2;
    }
    return out;
}

} // namespace torus

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "torus/operators.hpp"

#include <map>
#include <utility>

namespace torus {

// Smooth radial profile of the dyadic partition: phi(rho) = chi(rho/2) - chi(rho)
// with chi a closed-form smoothstep, identically 1 on [0, 3/4] and 0 on
// [4/3, inf). Then phi is supported in [3/4, 8/3] and sum_l phi(2^-l rho) = 1
// for every rho > 0.
class DyadicSymbol {
public:
    static constexpr double support_lo = 0.75;
    static constexpr double support_hi = 8.0 / 3.0;

    static double chi(double rho);
    double operator()(double rho) const { return chi(0.5 * rho) - chi(rho); }
};

DyadicSymbol build_phi();

// Active level range on a grid: outside [j_min, j_max] the block symbol
// vanishes on every resolved wavenumber.
int dyadic_j_min(const TorusGrid& grid);
int dyadic_j_max(const TorusGrid& grid);

// Delta_j u = phi(2^-j |D|) u; annihilates the mean mode.
SpectralField dyadic_block(const SpectralField& u, int j);
VectorField dyadic_block(const VectorField& u, int j);

// S_j u = sum_{k <= j-1} Delta_k u plus the mean mode.
SpectralField low_freq_cutoff(const SpectralField& u, int j);

struct BlockDecomposition {
    int j_min;
    int j_max;
    std::vector<SpectralField> blocks; // index j - j_min
    cplx mean;

    const SpectralField& block(int j) const { return blocks[std::size_t(j - j_min)]; }
};

BlockDecomposition decompose(const SpectralField& u);

// (u_BF, u_HF): blocks with l <= threshold vs l > threshold; the mean is
// carried by neither part.
std::pair<SpectralField, SpectralField> split_bf_hf(const SpectralField& u,
                                                    int threshold = 0);
std::pair<VectorField, VectorField> split_bf_hf(const VectorField& u,
                                                int threshold = 0);

} // namespace torus

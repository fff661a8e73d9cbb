// SPDX-License-Identifier: Apache-2.0
#include "torus/paraproduct.hpp"

namespace torus {

SpectralField paraproduct(const SpectralField& u, const SpectralField& v)
{
    require_same_grid(u.grid(), v.grid());
    SpectralField out(u.grid(), u.is_real() && v.is_real());
    for (int q = dyadic_j_min(v.grid()); q <= dyadic_j_max(v.grid()); ++q)
        out += product(low_freq_cutoff(u, q - 1), dyadic_block(v, q));
    return out;
}

SpectralField remainder(const SpectralField& u, const SpectralField& v)
{
    require_same_grid(u.grid(), v.grid());
    const int jmin = dyadic_j_min(u.grid());
    const int jmax = dyadic_j_max(u.grid());
    SpectralField out(u.grid(), u.is_real() && v.is_real());
    for (int q = jmin; q <= jmax; ++q) {
        SpectralField near(v.grid(), v.is_real());
        for (int dq = -1; dq <= 1; ++dq)
            if (q + dq >= jmin && q + dq <= jmax)
                near += dyadic_block(v, q + dq);
        out += product(dyadic_block(u, q), near);
    }
    return out;
}

BonySplit bony_product(const SpectralField& u, const SpectralField& v)
{
    return {paraproduct(u, v), paraproduct(v, u), remainder(u, v)};
}

SpectralField transport_commutator(const VectorField& v, const SpectralField& a, int q)
{
    require_same_grid(v.grid(), a.grid());
    return advect(v, dyadic_block(a, q)) - dyadic_block(advect(v, a), q);
}

} // namespace torus

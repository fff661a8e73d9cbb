// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "torus/littlewood_paley.hpp"

namespace torus {

// Bony paraproduct T_u v = sum_q S_{q-1}u Delta_q v, dealiased products.
SpectralField paraproduct(const SpectralField& u, const SpectralField& v);

// remainder R(u,v) = sum_q Delta_q u (Delta_{q-1} + Delta_q + Delta_{q+1}) v
SpectralField remainder(const SpectralField& u, const SpectralField& v);

struct BonySplit {
    SpectralField Tuv;
    SpectralField Tvu;
    SpectralField R;
};

// uv = T_u v + T_v u + R(u,v) + mean(u) mean(v); the split itself carries
// no mean-mean term, so reconstruction of the product is exact for
// mean-free factors.
BonySplit bony_product(const SpectralField& u, const SpectralField& v);

// [v . grad, Delta_q] a = v . grad(Delta_q a) - Delta_q(v . grad a)
SpectralField transport_commutator(const VectorField& v, const SpectralField& a, int q);

} // namespace torus

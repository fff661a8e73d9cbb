// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "torus/field.hpp"

#include <functional>
#include <limits>

namespace torus {

struct NonZeroMean : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct EllipticityViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr double infinity = std::numeric_limits<double>::infinity();

// transforms ------------------------------------------------------------

SpectralField forward_transform(const TorusGrid& grid,
                                const std::vector<double>& samples);
std::vector<double> inverse_transform(const SpectralField& u);
std::vector<cplx> inverse_transform_complex(const SpectralField& u);

// Fourier multipliers ----------------------------------------------------

// symbol of |k|; preserves realness (radial symbols are even)
using RadialSymbol = std::function<double(double)>;
SpectralField apply_radial_multiplier(const SpectralField& u,
                                      const RadialSymbol& m);

// real symbol of the wavevector
SpectralField apply_multiplier(const SpectralField& u,
                               const std::function<double(const std::array<int, 3>&)>& m,
                               bool even_symbol = true);

// differential operators ------------------------------------------------

SpectralField derivative(const SpectralField& u, int axis);
VectorField gradient(const SpectralField& u);
SpectralField divergence(const VectorField& w);
SpectralField laplacian(const SpectralField& u);
VectorField laplacian(const VectorField& u);
SpectralField inverse_laplacian(const SpectralField& u);
// A w = mu Lap w + (lambda + mu) grad div w
VectorField lame_operator(const VectorField& w, double mu, double lambda);
// largest |curl| component residual, used by gradient-field checks
double curl_linf(const VectorField& w);

// norms and products -----------------------------------------------------

// normalized grid quadrature, ||1||_p = 1; p = infinity gives the grid max
double lp_norm(const SpectralField& u, double p);
double lp_norm(const VectorField& u, double p);
double l2_norm(const SpectralField& u); // Parseval route, no transform

// zero every mode with any |k_j| > m/3 (2/3-rule)
SpectralField dealias(const SpectralField& u);
// dealiased pointwise product
SpectralField product(const SpectralField& u, const SpectralField& v);
// dealiased pointwise quotient u / w with w given by physical samples
SpectralField multiply_pointwise(const SpectralField& u,
                                 const std::vector<double>& w_phys);

SpectralField zero_field(const TorusGrid& grid);
SpectralField constant_field(const TorusGrid& grid, double c);
// u . grad a, dealiased
SpectralField advect(const VectorField& u, const SpectralField& a);

} // namespace torus

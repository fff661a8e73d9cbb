// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "torus/operators.hpp"

#include <cstdint>

namespace torus {

// Deterministic band-limited random fields for test corpora and experiment
// initial data. Mean-zero, real, |k_j| <= kmax, L2-normalized to `amplitude`.
SpectralField random_scalar(const TorusGrid& grid, std::uint64_t seed, int kmax,
                            double amplitude = 1.0);
VectorField random_vector(const TorusGrid& grid, std::uint64_t seed, int kmax,
                          double amplitude = 1.0);

// Leray projection onto divergence-free fields
VectorField solenoidal_part(const VectorField& u);

} // namespace torus

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace torus::fft {

using cplx = std::complex<double>;

// In-place radix-2 DIT transform of a contiguous line; n must be a power of
// two. sign = -1 gives the forward DFT convention sum a_j e^{-2pi i jk/n},
// sign = +1 the unnormalized inverse.
void line(cplx* data, std::size_t n, int sign);

// Separable transform over all axes of a row-major rank-d cube of extent m.
void cube(cplx* data, std::size_t m, int rank, int sign);

} // namespace torus::fft

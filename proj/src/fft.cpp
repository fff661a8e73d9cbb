// SPDX-License-Identifier: Apache-2.0
#include "torus/fft.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

namespace torus::fft {

void line(cplx* a, std::size_t n, int sign)
{
    assert(n > 0 && (n & (n - 1)) == 0);
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / double(len);
        const cplx wl = {std::cos(ang), std::sin(ang)};
        for (std::size_t i = 0; i < n; i += len) {
            cplx w = 1.0;
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

void cube(cplx* data, std::size_t m, int rank, int sign)
{
    std::size_t total = 1;
    for (int d = 0; d < rank; ++d)
        total *= m;
    std::vector<cplx> scratch(m);
    // axis = 0 is the slowest-varying index
    for (int axis = 0; axis < rank; ++axis) {
        std::size_t stride = 1;
        for (int d = axis + 1; d < rank; ++d)
            stride *= m;
        const std::size_t lines = total / m;
        for (std::size_t l = 0; l < lines; ++l) {
            // enumerate line starts: indices with the axis coordinate = 0
            const std::size_t outer = l / stride;
            const std::size_t inner = l % stride;
            const std::size_t base = outer * stride * m + inner;
            if (stride == 1) {
                line(data + base, m, sign);
            } else {
                for (std::size_t k = 0; k < m; ++k)
                    scratch[k] = data[base + k * stride];
                line(scratch.data(), m, sign);
                for (std::size_t k = 0; k < m; ++k)
                    data[base + k * stride] = scratch[k];
            }
        }
    }
}

} // namespace torus::fft

// SPDX-License-Identifier: Apache-2.0
#include "torus/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace torus::kernels {
namespace {

void cmul_real_s(cplx* a, const double* s, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        a[i] *= s[i];
}

void cmul_imag_s(cplx* a, const double* s, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        const double re = a[i].real(), im = a[i].imag();
        a[i] = {-im * s[i], re * s[i]};
    }
}

void mul_s(double* out, const double* a, const double* b, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a[i] * b[i];
}

void axpy_s(double alpha, double* a, const double* b, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        a[i] += alpha * b[i];
}

void caxpby_s(cplx alpha, const cplx* b, cplx beta, cplx* a, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        a[i] = beta * a[i] + alpha * b[i];
}

double sum_abs2_s(const cplx* a, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    return acc;
}

double sum_sq_s(const double* a, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += a[i] * a[i];
    return acc;
}

double max_abs_s(const double* a, std::size_t n)
{
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        m = std::max(m, std::abs(a[i]));
    return m;
}

} // namespace

const Table& scalar_table()
{
    static const Table t{cmul_real_s, cmul_imag_s, mul_s,      axpy_s,
                         caxpby_s,    sum_abs2_s,  sum_sq_s,   max_abs_s,
                         "scalar"};
    return t;
}

const Table& active()
{
    static const Table& t = avx2_supported() ? avx2_table() : scalar_table();
    return t;
}

} // namespace torus::kernels

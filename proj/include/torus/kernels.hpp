// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>

namespace torus::kernels {

using cplx = std::complex<double>;

// Data-parallel inner loops shared by the spectral operators. Every entry
// has a scalar reference implementation and (on x86 with AVX2) a vector
// variant; `active()` returns the table selected at startup.
struct Table {
    // a[i] *= s[i], real symbol
    void (*cmul_real)(cplx* a, const double* s, std::size_t n);
    // a[i] *= i * s[i], purely imaginary symbol (derivatives)
    void (*cmul_imag)(cplx* a, const double* s, std::size_t n);
    // out[i] = a[i] * b[i], physical-space product
    void (*mul)(double* out, const double* a, const double* b, std::size_t n);
    // a[i] += alpha * b[i]
    void (*axpy)(double alpha, double* a, const double* b, std::size_t n);
    // complex a[i] = beta*a[i] + alpha*b[i]
    void (*caxpby)(cplx alpha, const cplx* b, cplx beta, cplx* a, std::size_t n);
    // sum |a[i]|^2
    double (*sum_abs2)(const cplx* a, std::size_t n);
    // sum a[i]^2 over reals
    double (*sum_sq)(const double* a, std::size_t n);
    // max |a[i]| over reals
    double (*max_abs)(const double* a, std::size_t n);
    const char* name;
};

const Table& scalar_table();
const Table& avx2_table();   // falls back to scalar when unsupported at build time
bool avx2_supported();

// Runtime-selected table (AVX2 when the CPU has it, scalar otherwise).
const Table& active();

} // namespace torus::kernels

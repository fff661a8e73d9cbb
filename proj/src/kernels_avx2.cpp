// SPDX-License-Identifier: Apache-2.0
#include "torus/kernels.hpp"

#include <algorithm>
#include <cmath>

#if defined(__x86_64__) || defined(_M_X64)
#define TORUS_X86 1
#include <immintrin.h>
#else
#define TORUS_X86 0
#endif

namespace torus::kernels {

#if TORUS_X86

namespace {

// two complexes per ymm register, interleaved (re0, im0, re1, im1)

inline __m256d dup_pair(const double* s)
{
    // (s0, s1) -> (s0, s0, s1, s1)
    __m256d v = _mm256_castpd128_pd256(_mm_loadu_pd(s));
    return _mm256_permute4x64_pd(v, 0b01010000);
}

void cmul_real_v(cplx* a, const double* s, std::size_t n)
{
    double* p = reinterpret_cast<double*>(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d x = _mm256_loadu_pd(p + 2 * i);
        _mm256_storeu_pd(p + 2 * i, _mm256_mul_pd(x, dup_pair(s + i)));
    }
    for (; i < n; ++i)
        a[i] *= s[i];
}

void cmul_imag_v(cplx* a, const double* s, std::size_t n)
{
    const __m256d sign = _mm256_setr_pd(-1.0, 1.0, -1.0, 1.0);
    double* p = reinterpret_cast<double*>(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d x = _mm256_loadu_pd(p + 2 * i);
        __m256d sw = _mm256_permute_pd(x, 0b0101); // (im0, re0, im1, re1)
        __m256d sv = _mm256_mul_pd(dup_pair(s + i), sign);
        _mm256_storeu_pd(p + 2 * i, _mm256_mul_pd(sw, sv));
    }
    for (; i < n; ++i) {
        const double re = a[i].real(), im = a[i].imag();
        a[i] = {-im * s[i], re * s[i]};
    }
}

void mul_v(double* out, const double* a, const double* b, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                                _mm256_loadu_pd(b + i)));
    for (; i < n; ++i)
        out[i] = a[i] * b[i];
}

void axpy_v(double alpha, double* a, const double* b, std::size_t n)
{
    const __m256d al = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_fmadd_pd(al, _mm256_loadu_pd(b + i),
                                      _mm256_loadu_pd(a + i));
        _mm256_storeu_pd(a + i, acc);
    }
    for (; i < n; ++i)
        a[i] += alpha * b[i];
}

inline __m256d cscale(__m256d x, __m256d cre, __m256d cim_signed)
{
    // complex multiply by a broadcast constant c = cre + i cim:
    // c*x = cre*x + cim*(-im, re)
    __m256d sw = _mm256_permute_pd(x, 0b0101);
    return _mm256_fmadd_pd(cre, x, _mm256_mul_pd(cim_signed, sw));
}

void caxpby_v(cplx alpha, const cplx* b, cplx beta, cplx* a, std::size_t n)
{
    const __m256d sign = _mm256_setr_pd(-1.0, 1.0, -1.0, 1.0);
    const __m256d are = _mm256_set1_pd(alpha.real());
    const __m256d aim = _mm256_mul_pd(_mm256_set1_pd(alpha.imag()), sign);
    const __m256d bre = _mm256_set1_pd(beta.real());
    const __m256d bim = _mm256_mul_pd(_mm256_set1_pd(beta.imag()), sign);
    double* pa = reinterpret_cast<double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xa = _mm256_loadu_pd(pa + 2 * i);
        __m256d xb = _mm256_loadu_pd(pb + 2 * i);
        _mm256_storeu_pd(pa + 2 * i, _mm256_add_pd(cscale(xa, bre, bim),
                                                   cscale(xb, are, aim)));
    }
    for (; i < n; ++i)
        a[i] = beta * a[i] + alpha * b[i];
}

inline double hsum(__m256d v)
{
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double sum_abs2_v(const cplx* a, std::size_t n)
{
    const double* p = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d x = _mm256_loadu_pd(p + 2 * i);
        acc = _mm256_fmadd_pd(x, x, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i)
        s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    return s;
}

double sum_sq_v(const double* a, std::size_t n)
{
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x = _mm256_loadu_pd(a + i);
        acc = _mm256_fmadd_pd(x, x, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i)
        s += a[i] * a[i];
    return s;
}

double max_abs_v(const double* a, std::size_t n)
{
    const __m256d mask = _mm256_set1_pd(-0.0);
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        m = _mm256_max_pd(m, _mm256_andnot_pd(mask, _mm256_loadu_pd(a + i)));
    __m128d lo = _mm256_castpd256_pd128(m);
    __m128d hi = _mm256_extractf128_pd(m, 1);
    lo = _mm_max_pd(lo, hi);
    double r = _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
    for (; i < n; ++i)
        r = std::max(r, std::abs(a[i]));
    return r;
}

} // namespace

bool avx2_supported()
{
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const Table& avx2_table()
{
    static const Table t{cmul_real_v, cmul_imag_v, mul_v,    axpy_v,
                         caxpby_v,    sum_abs2_v,  sum_sq_v, max_abs_v,
                         "avx2"};
    return t;
}

#else

bool avx2_supported() { return false; }
const Table& avx2_table() { return scalar_table(); }

#endif

} // namespace torus::kernels

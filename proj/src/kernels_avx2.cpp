// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

// AVX2/FMA variants of the complex kernels. Two complex doubles per 256-bit
// register, interleaved [re, im, re, im]. Functions carry a target attribute
// so the rest of the library stays baseline x86-64.

#include "lagflow/kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define LAGFLOW_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#endif

namespace lagflow::kernels {

#ifdef LAGFLOW_HAVE_AVX2_KERNELS
namespace {

#define LAGFLOW_AVX2 __attribute__((target("avx2,fma")))

// a * x for a broadcast complex a = (ar, ai).
LAGFLOW_AVX2 inline __m256d cmul(__m256d ar, __m256d ai, __m256d x) {
    const __m256d xs = _mm256_permute_pd(x, 0x5);
    return _mm256_fmaddsub_pd(ar, x, _mm256_mul_pd(ai, xs));
}

LAGFLOW_AVX2 cplx dotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
    const double* xp = reinterpret_cast<const double*>(x);
    const double* yp = reinterpret_cast<const double*>(y);
    __m256d re = _mm256_setzero_pd();
    __m256d im = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        re = _mm256_fmadd_pd(xv, yv, re);
        im = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0x5), im);
    }
    alignas(32) double r[4], m[4];
    _mm256_store_pd(r, re);
    _mm256_store_pd(m, im);
    // im lanes hold (xr*yi, xi*yr, ...)
    double sre = (r[0] + r[1]) + (r[2] + r[3]);
    double sim = (m[0] - m[1]) + (m[2] - m[3]);
    for (; i < n; ++i) {
        sre += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        sim += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {sre, sim};
}

LAGFLOW_AVX2 void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
    const double* xp = reinterpret_cast<const double*>(x);
    double* yp = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(yv, cmul(ar, ai, xv)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

LAGFLOW_AVX2 void rot_avx2(cplx* x, cplx* y, std::size_t n, cplx a, cplx b, cplx c, cplx d) {
    double* xp = reinterpret_cast<double*>(x);
    double* yp = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(a.real()), ai = _mm256_set1_pd(a.imag());
    const __m256d br = _mm256_set1_pd(b.real()), bi = _mm256_set1_pd(b.imag());
    const __m256d cr = _mm256_set1_pd(c.real()), ci = _mm256_set1_pd(c.imag());
    const __m256d dr = _mm256_set1_pd(d.real()), di = _mm256_set1_pd(d.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        _mm256_storeu_pd(xp + 2 * i, _mm256_add_pd(cmul(ar, ai, xv), cmul(br, bi, yv)));
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(cmul(cr, ci, xv), cmul(dr, di, yv)));
    }
    for (; i < n; ++i) {
        const cplx xi = x[i], yi = y[i];
        x[i] = a * xi + b * yi;
        y[i] = c * xi + d * yi;
    }
}

LAGFLOW_AVX2 double nrm2sq_avx2(const cplx* x, std::size_t n) {
    const double* xp = reinterpret_cast<const double*>(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        acc = _mm256_fmadd_pd(xv, xv, acc);
    }
    alignas(32) double r[4];
    _mm256_store_pd(r, acc);
    double s = (r[0] + r[1]) + (r[2] + r[3]);
    for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

LAGFLOW_AVX2 void scal_avx2(cplx a, cplx* x, std::size_t n) {
    double* xp = reinterpret_cast<double*>(x);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        _mm256_storeu_pd(xp + 2 * i, cmul(ar, ai, _mm256_loadu_pd(xp + 2 * i)));
    }
    for (; i < n; ++i) x[i] *= a;
}

#undef LAGFLOW_AVX2

const KernelTable kAvx2{dotc_avx2, axpy_avx2, rot_avx2, nrm2sq_avx2, scal_avx2, "avx2"};

}  // namespace

const KernelTable* avx2_table() {
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok ? &kAvx2 : nullptr;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace lagflow::kernels

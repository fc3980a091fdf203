// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

// Complex vector kernels used by the dense linear algebra. Each kernel has a
// portable scalar reference and an AVX2/FMA variant; the variant is chosen
// once at startup from the CPU feature flags. Setting LAGFLOW_SIMD=scalar in
// the environment forces the reference kernels.

#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace lagflow::kernels {

using cplx = std::complex<double>;

struct KernelTable {
    // sum_i conj(x_i) * y_i
    cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
    // y_i += a * x_i
    void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
    // (x_i, y_i) <- (a x_i + b y_i, c x_i + d y_i)
    void (*rot)(cplx* x, cplx* y, std::size_t n, cplx a, cplx b, cplx c, cplx d);
    // sum_i |x_i|^2
    double (*nrm2sq)(const cplx* x, std::size_t n);
    // x_i *= a
    void (*scal)(cplx a, cplx* x, std::size_t n);
    const char* name;
};

const KernelTable& scalar_table();
// Null when the build or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

// The table selected for this process.
const KernelTable& active();

inline cplx dotc(const cplx* x, const cplx* y, std::size_t n) { return active().dotc(x, y, n); }
inline void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) { active().axpy(a, x, y, n); }
inline void rot(cplx* x, cplx* y, std::size_t n, cplx a, cplx b, cplx c, cplx d) {
    active().rot(x, y, n, a, b, c, d);
}
inline double nrm2sq(const cplx* x, std::size_t n) { return active().nrm2sq(x, n); }
inline void scal(cplx a, cplx* x, std::size_t n) { active().scal(a, x, n); }

}  // namespace lagflow::kernels

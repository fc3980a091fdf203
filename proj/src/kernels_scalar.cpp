// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "lagflow/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace lagflow::kernels {
namespace {

cplx dotc_ref(const cplx* x, const cplx* y, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    return {re, im};
}

void axpy_ref(cplx a, const cplx* x, cplx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void rot_ref(cplx* x, cplx* y, std::size_t n, cplx a, cplx b, cplx c, cplx d) {
    for (std::size_t i = 0; i < n; ++i) {
        const cplx xi = x[i], yi = y[i];
        x[i] = a * xi + b * yi;
        y[i] = c * xi + d * yi;
    }
}

double nrm2sq_ref(const cplx* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(x[i]);
    return s;
}

void scal_ref(cplx a, cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

const KernelTable kScalar{dotc_ref, axpy_ref, rot_ref, nrm2sq_ref, scal_ref, "scalar"};

const KernelTable& select() {
    const char* force = std::getenv("LAGFLOW_SIMD");
    if (force != nullptr && std::strcmp(force, "scalar") == 0) return kScalar;
    if (const KernelTable* t = avx2_table()) return *t;
    return kScalar;
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable& active() {
    static const KernelTable& table = select();
    return table;
}

}  // namespace lagflow::kernels

// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "lagflow/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "lagflow/errors.hpp"

namespace lagflow {

IsotropicSubspace IsotropicSubspace::from_hminus(const Matrix& w) {
    if (w.rows() == 0) throw InputError("isotropic subspace needs n >= 1");
    if (w.cols() > w.rows()) throw InputError("W has more columns than H- dimensions");
    Matrix q = w.cols() == 0 ? w : linalg::orthonormalize(w);
    Matrix c = linalg::orthogonal_complement(q);
    if (c.cols() + q.cols() != w.rows()) throw InputError("W frame is rank deficient");
    return IsotropicSubspace(std::move(q), std::move(c));
}

IsotropicSubspace IsotropicSubspace::from_indices(std::size_t n, const std::vector<std::size_t>& indices) {
    std::vector<bool> in(n, false);
    for (std::size_t i : indices) {
        if (i < 1 || i > n) throw InputError("W index out of range");
        if (in[i - 1]) throw InputError("duplicate W index");
        in[i - 1] = true;
    }
    Matrix w(n, indices.size()), c(n, n - indices.size());
    std::vector<std::size_t> sorted = indices;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k) w(sorted[k] - 1, k) = 1.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (!in[i]) c(i, k++) = 1.0;
    return IsotropicSubspace(std::move(w), std::move(c));
}

IsotropicSubspace IsotropicSubspace::from_ambient(const Matrix& frame) {
    if (frame.rows() % 2 != 0) throw InputError("ambient frame needs 2n rows");
    const std::size_t n = frame.rows() / 2;
    if (frame.block(0, 0, n, frame.cols()).max_abs() > 1e-12) throw InputError("W must lie in H-");
    return from_hminus(frame.block(n, 0, n, frame.cols()));
}

Matrix IsotropicSubspace::ambient_frame() const {
    Matrix f(2 * ambient_n(), dim());
    f.set_block(ambient_n(), 0, w_);
    return f;
}

namespace reduction {
namespace {

Matrix lift_hminus(const Matrix& u) {
    Matrix f(2 * u.rows(), u.cols());
    f.set_block(u.rows(), 0, u);
    return f;
}

// Basis [J u | u] of H_W.
Matrix reduced_basis(const IsotropicSubspace& w) {
    const Matrix u = lift_hminus(w.complement());
    return hcat(grassmann::apply_j(u), u);
}

}  // namespace

AnnihilatorAndReduced annihilator_and_reduced(const IsotropicSubspace& w) {
    const Matrix jw = grassmann::apply_j(w.ambient_frame());
    return {linalg::orthogonal_complement(jw), reduced_basis(w)};
}

Matrix intersect_annihilator(const LagrangianFrame& l, const IsotropicSubspace& w, const Tolerance& tol) {
    if (l.n() != w.ambient_n()) throw InputError("lagrangian and W live in different spaces");
    const Matrix& z = l.frame();
    if (w.dim() == 0) return z;
    const Matrix jw = grassmann::apply_j(w.ambient_frame());
    // L ∩ (JW)^⊥ = { Zc : (JW)* Z c = 0 }
    return z * linalg::numeric_kernel(adjoint_times(jw, z), tol);
}

LagrangianFrame reduce_lagrangian(const LagrangianFrame& l, const IsotropicSubspace& w, const Tolerance& tol) {
    if (linalg::subspace_intersection_dim(l.frame(), w.ambient_frame(), tol) > 0)
        throw PreconditionError("not clean");
    const GeneralizedReduction g = generalized_reduce(l, w, tol);
    return LagrangianFrame(g.ell, 1e-8);
}

GeneralizedReduction generalized_reduce(const LagrangianFrame& l, const IsotropicSubspace& w, const Tolerance& tol) {
    if (l.n() != w.ambient_n()) throw InputError("lagrangian and W live in different spaces");
    const std::size_t q = w.codim_in_hminus();
    GeneralizedReduction out;
    out.v = linalg::subspace_intersection(l.frame(), w.ambient_frame(), tol);
    const Matrix lw = intersect_annihilator(l, w, tol);
    if (lw.cols() != out.v.cols() + q) throw PreconditionError("reduced-space dimension mismatch");
    if (q == 0) {
        out.ell = Matrix(0, 0);
        return out;
    }
    const Matrix coords = adjoint_times(reduced_basis(w), lw);
    out.ell = linalg::numeric_range(coords, tol);
    if (out.ell.cols() != q) throw PreconditionError("reduced-space dimension mismatch");
    return out;
}

UnitaryMatrix reduce_unitary(const UnitaryMatrix& u, const std::vector<std::size_t>& w_indices, cplx lambda,
                             const Tolerance& tol) {
    const std::size_t n = u.n();
    if (std::abs(std::abs(lambda) - 1.0) > 1e-12) throw InputError("lambda must have modulus 1");
    if (std::abs(lambda + 1.0) < 1e-12) throw InputError("lambda = -1 has no reduction");
    std::vector<bool> in(n, false);
    for (std::size_t i : w_indices) {
        if (i < 1 || i > n) throw InputError("W index out of range");
        if (in[i - 1]) throw InputError("duplicate W index");
        in[i - 1] = true;
    }
    std::vector<std::size_t> wi, ri;
    for (std::size_t i = 0; i < n; ++i) (in[i] ? wi : ri).push_back(i);
    if (ri.empty()) throw InputError("W must be a proper subspace");
    auto pick = [&](const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
        Matrix b(rows.size(), cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < rows.size(); ++i) b(i, j) = u.matrix()(rows[i], cols[j]);
        return b;
    };
    const Matrix t = pick(ri, ri);
    if (wi.empty()) return UnitaryMatrix(t);
    Matrix lx = pick(wi, wi);
    for (std::size_t i = 0; i < wi.size(); ++i) lx(i, i) += lambda;
    const std::vector<double> s = linalg::singular_values(lx);
    if (s.back() <= tol.rank_eps * std::max(1.0, s.front())) throw PreconditionError("not clean");
    const Matrix r = t - pick(ri, wi) * linalg::solve(lx, pick(wi, ri));
    return UnitaryMatrix(r, 1e-8);
}

}  // namespace reduction
}  // namespace lagflow

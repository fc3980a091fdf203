// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "lagflow/grassmann.hpp"

#include <cmath>
#include <string>

#include "lagflow/errors.hpp"

namespace lagflow {

namespace {
const cplx kI(0.0, 1.0);
}

LagrangianFrame::LagrangianFrame(Matrix frame, double tol) : frame_(std::move(frame)) {
    if (frame_.rows() != 2 * frame_.cols() || frame_.cols() == 0)
        throw InputError("lagrangian frame must be 2n x n with n >= 1");
    if (!frame_.all_finite()) throw InputError("non-finite matrix entry");
    if (linalg::orthonormality_residual(frame_) > tol) throw InputError("lagrangian frame is not orthonormal");
    if (adjoint_times(frame_, grassmann::apply_j(frame_)).max_abs() > tol)
        throw InputError("frame does not span a lagrangian subspace");
}

LagrangianFrame LagrangianFrame::from_spanning(const Matrix& columns, double tol) {
    return LagrangianFrame(linalg::orthonormalize(columns), tol);
}

UnitaryMatrix::UnitaryMatrix(Matrix u, double tol) : u_(std::move(u)) {
    if (u_.rows() != u_.cols() || u_.rows() == 0) throw InputError("unitary matrix must be square");
    if (!u_.all_finite()) throw InputError("non-finite matrix entry");
    if (linalg::unitarity_residual(u_) > tol) throw InputError("matrix is not unitary");
}

namespace grassmann {

Matrix complex_structure(std::size_t n) {
    Matrix j(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        j(i, n + i) = 1.0;
        j(n + i, i) = -1.0;
    }
    return j;
}

Matrix apply_j(const Matrix& x) {
    if (x.rows() % 2 != 0) throw InputError("J needs an even number of rows");
    const std::size_t n = x.rows() / 2;
    Matrix y(x.rows(), x.cols());
    y.set_block(0, 0, x.block(n, 0, n, x.cols()));
    y.set_block(n, 0, x.block(0, 0, n, x.cols()) * cplx(-1.0));
    return y;
}

std::pair<LagrangianFrame, LagrangianFrame> standard_lagrangians(std::size_t n) {
    if (n == 0) throw InputError("n must be positive");
    Matrix hp(2 * n, n), hm(2 * n, n);
    for (std::size_t i = 0; i < n; ++i) {
        hp(i, i) = 1.0;
        hm(n + i, i) = 1.0;
    }
    return {LagrangianFrame(hp), LagrangianFrame(hm)};
}

LagrangianFrame cayley_graph(const UnitaryMatrix& u) {
    // [(1+U); -i(1-U)] has Gram matrix 4I for unitary U, so halving it
    // already gives an orthonormal frame.
    const std::size_t n = u.n();
    const Matrix id = Matrix::identity(n);
    Matrix z = vcat((id + u.matrix()) * cplx(0.5), (id - u.matrix()) * cplx(0.0, -0.5));
    return LagrangianFrame(linalg::orthonormalize(z));
}

Matrix reflection_of(const LagrangianFrame& l) {
    const Matrix& z = l.frame();
    return z * z.adjoint() * cplx(2.0) - Matrix::identity(z.rows());
}

UnitaryMatrix lagrangian_to_unitary(const LagrangianFrame& l) {
    // Conjugate R_L : Ker(J + i) -> Ker(J - i) by the isometries
    // x -> (x, -ix)/sqrt2 and x -> (x, ix)/sqrt2.
    const std::size_t n = l.n();
    const Matrix id = Matrix::identity(n);
    const double r = 1.0 / std::sqrt(2.0);
    const Matrix e_minus = vcat(id * cplx(r), id * cplx(0.0, -r));
    const Matrix e_plus = vcat(id * cplx(r), id * cplx(0.0, r));
    Matrix u = adjoint_times(e_plus, reflection_of(l) * e_minus);
    return UnitaryMatrix(std::move(u), 1e-8);
}

Matrix graph_projection(const LagrangianFrame& base, const HermitianMatrix& s) {
    const std::size_t n = base.n();
    if (s.dim() != n) throw InputError("chart coordinate size mismatch");
    const Matrix& sm = s.matrix();
    const Matrix m = linalg::inverse(Matrix::identity(n) + sm * sm);  // (1+S^2)^{-1}
    const Matrix ms = m * sm;
    // In the basis [Z0 | J Z0] the operator J : L0 -> L0^⊥ is the identity.
    Matrix blocks(2 * n, 2 * n);
    blocks.set_block(0, 0, m);
    blocks.set_block(0, n, ms);
    blocks.set_block(n, 0, ms);
    blocks.set_block(n, n, ms * sm);
    const Matrix b = hcat(base.frame(), apply_j(base.frame()));
    return b * blocks * b.adjoint();
}

LagrangianFrame chart_point(const LagrangianFrame& base, const HermitianMatrix& s) {
    if (s.dim() != base.n()) throw InputError("chart coordinate size mismatch");
    const Matrix& z = base.frame();
    return LagrangianFrame(linalg::orthonormalize(z + apply_j(z) * s.matrix()));
}

LagrangianFrame chart_point(const ArnoldChartPoint& p) { return chart_point(p.base, p.coord); }

HermitianMatrix chart_coordinates(const LagrangianFrame& l, const LagrangianFrame& base, const Tolerance& tol) {
    if (l.n() != base.n()) throw InputError("lagrangian dimension mismatch");
    if (linalg::sigma_min(reflection_of(l) + reflection_of(base)) <= tol.rank_eps)
        throw PreconditionError("not in chart");
    const Matrix& z0 = base.frame();
    const Matrix a = adjoint_times(z0, l.frame());           // P_{L0}|_L
    const Matrix b = adjoint_times(apply_j(z0), l.frame());  // P_{L0^⊥}|_L, in J Z0 coordinates
    // s a = b, i.e. s = b a^{-1}
    const Matrix s = linalg::solve(a.adjoint(), b.adjoint()).adjoint();
    return HermitianMatrix(s);
}

Matrix projection_derivative(const LagrangianFrame& l, const HermitianMatrix& s) {
    const Matrix& z = l.frame();
    const Matrix zsz = z * s.matrix() * z.adjoint();
    return apply_j(zsz) + apply_j(zsz.adjoint()).adjoint();
}

LagrangianFrame switched_graph(const HermitianMatrix& t) {
    return LagrangianFrame(linalg::orthonormalize(vcat(t.matrix(), Matrix::identity(t.dim()))));
}

UnitaryMatrix unitary_of_operator(const HermitianMatrix& t) {
    const std::size_t n = t.dim();
    const Matrix id = Matrix::identity(n);
    const Matrix r = linalg::inverse(t.matrix() + id * kI);
    return UnitaryMatrix(id - r * cplx(0.0, 2.0), 1e-8);
}

bool same_lagrangian(const LagrangianFrame& a, const LagrangianFrame& b, const Tolerance& tol) {
    return linalg::same_subspace(a.frame(), b.frame(), tol);
}

}  // namespace grassmann
}  // namespace lagflow

// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

// Lagrangian subspaces of C^n ⊕ C^n with J(x, y) = (y, -x): standard
// lagrangians, the Cayley graph map and its inverse, reflections, Arnold
// charts, and switched graphs of Hermitian matrices.

#pragma once

#include <utility>

#include "lagflow/linalg.hpp"

namespace lagflow {

// Orthonormal 2n x n frame of a lagrangian subspace.
class LagrangianFrame {
public:
    LagrangianFrame() = default;
    // Validates Z*Z = I and Z*JZ = 0 to `tol`; throws InputError.
    explicit LagrangianFrame(Matrix frame, double tol = 1e-10);
    // Orthonormalizes the columns first.
    static LagrangianFrame from_spanning(const Matrix& columns, double tol = 1e-10);

    std::size_t n() const { return frame_.cols(); }
    const Matrix& frame() const { return frame_; }

private:
    Matrix frame_;
};

class UnitaryMatrix {
public:
    UnitaryMatrix() = default;
    explicit UnitaryMatrix(Matrix u, double tol = 1e-10);

    std::size_t n() const { return u_.rows(); }
    const Matrix& matrix() const { return u_; }

private:
    Matrix u_;
};

struct ArnoldChartPoint {
    LagrangianFrame base;
    HermitianMatrix coord;
};

namespace grassmann {

// J as a 2n x 2n matrix.
Matrix complex_structure(std::size_t n);
// J x for a matrix with 2n rows.
Matrix apply_j(const Matrix& x);

// (H+, H-) = ([I; 0], [0; I]).
std::pair<LagrangianFrame, LagrangianFrame> standard_lagrangians(std::size_t n);

LagrangianFrame cayley_graph(const UnitaryMatrix& u);
UnitaryMatrix lagrangian_to_unitary(const LagrangianFrame& l);
// R_L = 2 Z Z* - I.
Matrix reflection_of(const LagrangianFrame& l);

// Orthogonal projection onto the graph of JS over L0, assembled from the
// (L0, L0^⊥) block formula; returned as a 2n x 2n ambient matrix.
Matrix graph_projection(const LagrangianFrame& base, const HermitianMatrix& s);
LagrangianFrame chart_point(const LagrangianFrame& base, const HermitianMatrix& s);
LagrangianFrame chart_point(const ArnoldChartPoint& p);
// Throws PreconditionError("not in chart") when L meets L0^⊥.
HermitianMatrix chart_coordinates(const LagrangianFrame& l, const LagrangianFrame& base,
                                  const Tolerance& tol = {});
// d/ds of the projection onto chart_point(L, sS) at s = 0:
// J Z S Z* - Z S Z* J.
Matrix projection_derivative(const LagrangianFrame& l, const HermitianMatrix& s);

// span [T; I].
LagrangianFrame switched_graph(const HermitianMatrix& t);
// I - 2i (T + iI)^{-1}.
UnitaryMatrix unitary_of_operator(const HermitianMatrix& t);

bool same_lagrangian(const LagrangianFrame& a, const LagrangianFrame& b, const Tolerance& tol = {});

}  // namespace grassmann
}  // namespace lagflow

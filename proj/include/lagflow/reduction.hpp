// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

// Symplectic reduction by isotropic subspaces W ⊆ H-, the Schur-complement
// reduction of unitaries, and generalized reduction of non-clean lagrangians.

#pragma once

#include <vector>

#include "lagflow/grassmann.hpp"

namespace lagflow {

// W ⊆ H- given by an orthonormal n x p frame w of its H- coordinates. The
// ambient frame is [0; w]. `complement` is an orthonormal frame of H- ⊖ W
// (n x (n - p)); its columns u_j fix the basis (J u_j, u_j) of H_W.
class IsotropicSubspace {
public:
    IsotropicSubspace() = default;
    // Orthonormalizes w.
    static IsotropicSubspace from_hminus(const Matrix& w);
    // W = span{f_i : i in indices}, 1-based; the complement uses the
    // remaining f_j in index order.
    static IsotropicSubspace from_indices(std::size_t n, const std::vector<std::size_t>& indices);
    // Accepts an ambient 2n x p frame; rejects H+ components above 1e-12.
    static IsotropicSubspace from_ambient(const Matrix& frame);

    std::size_t ambient_n() const { return w_.rows(); }
    std::size_t dim() const { return w_.cols(); }
    std::size_t codim_in_hminus() const { return w_.rows() - w_.cols(); }
    const Matrix& hminus_frame() const { return w_; }
    const Matrix& complement() const { return complement_; }
    Matrix ambient_frame() const;

private:
    IsotropicSubspace(Matrix w, Matrix complement) : w_(std::move(w)), complement_(std::move(complement)) {}
    Matrix w_;
    Matrix complement_;
};

namespace reduction {

struct AnnihilatorAndReduced {
    Matrix w_omega;  // (JW)^⊥, 2n x (2n - p)
    Matrix h_w;      // (W ⊕ JW)^⊥ as [J u | u], 2n x 2(n - p)
};

AnnihilatorAndReduced annihilator_and_reduced(const IsotropicSubspace& w);

// Clean case. Throws PreconditionError("not clean") if dim(L ∩ W) > 0.
LagrangianFrame reduce_lagrangian(const LagrangianFrame& l, const IsotropicSubspace& w, const Tolerance& tol = {});

// T - Z (lambda + X)^{-1} Y with U = [[X, Y], [Z, T]] in the W ⊕ W^⊥ split,
// W spanned by the listed coordinates (1-based). The result acts on the
// remaining coordinates in index order. lambda = -1 is rejected with
// InputError; a singular lambda + X raises PreconditionError("not clean").
UnitaryMatrix reduce_unitary(const UnitaryMatrix& u, const std::vector<std::size_t>& w_indices,
                             cplx lambda = 1.0, const Tolerance& tol = {});

struct GeneralizedReduction {
    Matrix ell;  // frame of the reduced lagrangian in H_W coordinates; 0 columns when H_W = 0
    Matrix v;    // ambient frame of L ∩ W
};

GeneralizedReduction generalized_reduce(const LagrangianFrame& l, const IsotropicSubspace& w,
                                        const Tolerance& tol = {});

// Ambient frame of L ∩ W^ω.
Matrix intersect_annihilator(const LagrangianFrame& l, const IsotropicSubspace& w, const Tolerance& tol);

}  // namespace reduction
}  // namespace lagflow

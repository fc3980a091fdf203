// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

// Local intersection numbers of (2k-1)-parameter families with the
// Schubert variety {L : L ∩ W ≠ 0}, W ⊆ H- of codimension k - 1, and
// their location and summation over meshed parameter boxes.
//
// Every number is the sign of a real (2k-1) x (2k-1) determinant. Row i
// belongs to the i-th parameter direction; the columns are
// [<X_i v, v>, Re <X_i g_1, v>, Im <X_i g_1, v>, ..., Im <X_i g_{k-1}, v>]
// where v spans L ∩ W and g_j is an orthonormal basis of the orthogonal
// complement of v in L ∩ W^ω.

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "lagflow/grassmann.hpp"
#include "lagflow/reduction.hpp"

namespace lagflow {

// Operator-level jet: T0 with its 2k - 1 partial derivatives and W ⊆ C^n
// of codimension k - 1 (orthonormalized on construction).
struct FamilyJet {
    std::size_t k = 1;
    HermitianMatrix t0;
    std::vector<HermitianMatrix> partials;
    Matrix w;

    void validate() const;
};

// Lagrangian-level jet: tangents are chart derivatives in Sym(L),
// expressed in the basis given by the columns of the frame of L.
struct LagrangianJet {
    std::size_t k = 1;
    LagrangianFrame l;
    std::vector<HermitianMatrix> tangents;
    IsotropicSubspace w;

    void validate() const;
};

// Tangents given as derivatives of the orthogonal projection onto L
// (2n x 2n).
struct ProjectionJet {
    std::size_t k = 1;
    LagrangianFrame l;
    std::vector<Matrix> projection_derivatives;
    IsotropicSubspace w;

    void validate() const;
};

struct IntersectionResult {
    int epsilon = 0;
    std::size_t kernel_dim = 0;
    double det = 0.0;
};

IntersectionResult intersection_number_lagrangian(const LagrangianJet& jet, const Tolerance& tol = {});
IntersectionResult intersection_number_projection(const ProjectionJet& jet, const Tolerance& tol = {});
IntersectionResult intersection_number_operator(const FamilyJet& jet, const Tolerance& tol = {});

// The jet of t -> switched graph of T(t): L = graph of T0 and
// S_i = B* ∂_i T B with B the lower half of the frame of L.
LagrangianJet graph_jet(const FamilyJet& jet);

// A lagrangian-valued family on the box [lower, upper] ⊂ R^d, sampled on a
// mesh with `nodes` points per axis. `orientation` is +1 when the
// coordinate order is positively oriented on the underlying manifold.
struct MeshFamily {
    std::vector<double> lower, upper;
    std::size_t nodes = 17;
    int orientation = 1;
    std::function<LagrangianFrame(const std::vector<double>&)> value;

    std::size_t dim() const { return lower.size(); }
    void validate() const;
    // Same family through t -> switched graph of T(t).
    static MeshFamily of_operators(std::vector<double> lower, std::vector<double> upper, std::size_t nodes,
                                   std::function<HermitianMatrix(const std::vector<double>&)> t);
};

struct LocatedCrossing {
    std::vector<double> point;
    double residual;  // smallest singular value of [frame(L) | -frame(W)]
};

// Detector minima refined by Nelder-Mead. Throws PreconditionError
// "boundary crossing" or "unresolved cluster".
std::vector<LocatedCrossing> locate_crossings(const MeshFamily& family, const IsotropicSubspace& w,
                                              const Tolerance& tol = {});

// Tangents at `point` by central differences of chart coordinates.
LagrangianJet family_jet(const MeshFamily& family, const std::vector<double>& point, const IsotropicSubspace& w);

struct TotalIntersection {
    int total = 0;
    struct Entry {
        std::size_t chart;
        LocatedCrossing crossing;
        IntersectionResult result;
    };
    std::vector<Entry> crossings;
};

// Sum of orientation-weighted local numbers over all charts; a crossing
// seen by several charts is counted once.
TotalIntersection total_intersection_number(const std::vector<MeshFamily>& charts, const IsotropicSubspace& w,
                                            const Tolerance& tol = {});

}  // namespace lagflow

// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

// Schubert cells of the lagrangian Grassmannian relative to the standard
// decreasing flag W_j = span{f_{j+1}, ..., f_n} of H-, with f_i the standard
// H- basis and e_i = J f_i.

#pragma once

#include <vector>

#include "lagflow/grassmann.hpp"

namespace lagflow {

class Flag {
public:
    explicit Flag(std::size_t n);
    std::size_t n() const { return n_; }
    // Ambient 2n x (n - j) frame of W_j, j = 0..n.
    Matrix subspace(std::size_t j) const;

private:
    std::size_t n_;
};

// Strictly increasing positive integers with weight N_I = Σ (2i - 1).
class SchubertIndex {
public:
    SchubertIndex() = default;
    explicit SchubertIndex(std::vector<std::size_t> entries);
    const std::vector<std::size_t>& entries() const { return entries_; }
    std::size_t weight() const { return weight_; }
    bool contains(std::size_t i) const;

private:
    std::vector<std::size_t> entries_;
    std::size_t weight_ = 0;
};

namespace schubert {

// d_j = dim(L ∩ W_j), j = 0..n.
std::vector<std::size_t> incidence_profile(const LagrangianFrame& l, const Flag& flag, const Tolerance& tol = {});
// Nodes j with d_{j-1} > d_j, listed once per unit of drop.
std::vector<std::size_t> drop_nodes(const std::vector<std::size_t>& profile);
// Throws PreconditionError("non-generic profile") on a drop larger than one.
SchubertIndex schubert_index_of(const LagrangianFrame& l, const Flag& flag, const Tolerance& tol = {});

// H_I^+ = F_I ⊕ J F_{I^c} with ordered basis (f_i, i ∈ I; e_j, j ∈ I^c).
LagrangianFrame cell_base(const SchubertIndex& index, const Flag& flag);

struct MembershipResult {
    bool member;
    double residual;  // largest modulus among the constrained entries
};

// Tests <A f_i, f_j> = 0 and <A f_i, e_j> = 0 for j <= i, i ∈ I, with A in
// the ordered basis of H_I^+. Entries count as zero below
// rank_eps * max(1, max|A|).
MembershipResult chart_membership_equations(const HermitianMatrix& a, const SchubertIndex& index, const Flag& flag,
                                            const Tolerance& tol = {});

std::size_t cell_codimension(const SchubertIndex& index);

// d_j >= #{i ∈ I : i > j} for all j.
bool variety_membership(const LagrangianFrame& l, const SchubertIndex& index, const Flag& flag,
                        const Tolerance& tol = {});

}  // namespace schubert
}  // namespace lagflow

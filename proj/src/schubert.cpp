// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "lagflow/schubert.hpp"

#include <algorithm>

#include "lagflow/errors.hpp"

namespace lagflow {

Flag::Flag(std::size_t n) : n_(n) {
    if (n == 0) throw InputError("flag dimension must be positive");
}

Matrix Flag::subspace(std::size_t j) const {
    if (j > n_) throw InputError("flag index out of range");
    Matrix w(2 * n_, n_ - j);
    for (std::size_t k = 0; k < n_ - j; ++k) w(n_ + j + k, k) = 1.0;
    return w;
}

SchubertIndex::SchubertIndex(std::vector<std::size_t> entries) : entries_(std::move(entries)) {
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        if (entries_[k] == 0) throw InputError("Schubert index entries must be positive");
        if (k > 0 && entries_[k] <= entries_[k - 1]) throw InputError("Schubert index must be strictly increasing");
        weight_ += 2 * entries_[k] - 1;
    }
}

bool SchubertIndex::contains(std::size_t i) const {
    return std::binary_search(entries_.begin(), entries_.end(), i);
}

namespace schubert {
namespace {

void check_fits(const SchubertIndex& index, const Flag& flag) {
    if (!index.entries().empty() && index.entries().back() > flag.n())
        throw InputError("Schubert index exceeds the flag dimension");
}

}  // namespace

std::vector<std::size_t> incidence_profile(const LagrangianFrame& l, const Flag& flag, const Tolerance& tol) {
    if (l.n() != flag.n()) throw InputError("lagrangian and flag dimensions differ");
    std::vector<std::size_t> d(flag.n() + 1, 0);
    for (std::size_t j = 0; j < flag.n(); ++j)
        d[j] = linalg::subspace_intersection_dim(l.frame(), flag.subspace(j), tol);
    // W_j ⊂ W_{j-1}, so any numerical increase is a threshold tie; resolve
    // it toward the smaller value.
    for (std::size_t j = 1; j <= flag.n(); ++j) d[j] = std::min(d[j], d[j - 1]);
    return d;
}

std::vector<std::size_t> drop_nodes(const std::vector<std::size_t>& profile) {
    std::vector<std::size_t> nodes;
    for (std::size_t j = 1; j < profile.size(); ++j)
        for (std::size_t k = profile[j]; k < profile[j - 1]; ++k) nodes.push_back(j);
    return nodes;
}

SchubertIndex schubert_index_of(const LagrangianFrame& l, const Flag& flag, const Tolerance& tol) {
    const std::vector<std::size_t> d = incidence_profile(l, flag, tol);
    for (std::size_t j = 1; j < d.size(); ++j)
        if (d[j - 1] > d[j] + 1) throw PreconditionError("non-generic profile");
    return SchubertIndex(drop_nodes(d));
}

LagrangianFrame cell_base(const SchubertIndex& index, const Flag& flag) {
    check_fits(index, flag);
    const std::size_t n = flag.n();
    Matrix z(2 * n, n);
    std::size_t c = 0;
    for (std::size_t i : index.entries()) z(n + i - 1, c++) = 1.0;  // f_i
    for (std::size_t j = 1; j <= n; ++j)
        if (!index.contains(j)) z(j - 1, c++) = 1.0;  // e_j = J f_j
    return LagrangianFrame(z);
}

MembershipResult chart_membership_equations(const HermitianMatrix& a, const SchubertIndex& index, const Flag& flag,
                                            const Tolerance& tol) {
    check_fits(index, flag);
    const std::size_t n = flag.n();
    if (a.dim() != n) throw InputError("chart coordinate does not match the basis of H_I^+");
    const std::vector<std::size_t>& in = index.entries();
    const std::size_t k = in.size();
    // position of f_i and of e_j in the ordered basis
    std::vector<std::size_t> pos_e(n + 1, 0);
    for (std::size_t j = 1, c = k; j <= n; ++j)
        if (!index.contains(j)) pos_e[j] = c++;
    double residual = 0.0;
    for (std::size_t a_i = 0; a_i < k; ++a_i) {
        const std::size_t i = in[a_i];
        for (std::size_t a_j = 0; a_j <= a_i; ++a_j)  // <A f_i, f_j>, j <= i
            residual = std::max(residual, std::abs(a(a_j, a_i)));
        for (std::size_t j = 1; j < i; ++j)  // <A f_i, e_j>, j < i
            if (!index.contains(j)) residual = std::max(residual, std::abs(a(pos_e[j], a_i)));
    }
    const double thr = tol.rank_eps * std::max(1.0, a.matrix().max_abs());
    return {residual <= thr, residual};
}

std::size_t cell_codimension(const SchubertIndex& index) { return index.weight(); }

bool variety_membership(const LagrangianFrame& l, const SchubertIndex& index, const Flag& flag, const Tolerance& tol) {
    check_fits(index, flag);
    const std::vector<std::size_t> d = incidence_profile(l, flag, tol);
    for (std::size_t j = 0; j <= flag.n(); ++j) {
        const auto above = static_cast<std::size_t>(std::count_if(
            index.entries().begin(), index.entries().end(), [j](std::size_t i) { return i > j; }));
        if (d[j] < above) return false;
    }
    return true;
}

}  // namespace schubert
}  // namespace lagflow

// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

// The family T_U = -i d/dt on [0, 1] with f(1) = U f(0), U in U(N): its
// spectrum, a centered finite-difference model, spectral flow along loops
// of boundary conditions, and the Möbius involution U -> (1 - 3U)(3 - U)^{-1}.

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "lagflow/flow.hpp"
#include "lagflow/grassmann.hpp"

namespace lagflow {

// Loop t -> U_t on [0, 1] with U_0 = U_1. Function-backed loops are
// refined on demand; sampled loops are used at their nodes only.
class UnitaryLoop {
public:
    using Fn = std::function<UnitaryMatrix(double)>;

    UnitaryLoop() = default;
    static UnitaryLoop from_function(Fn value, std::vector<double> grid);
    static UnitaryLoop sampled(std::vector<double> grid, std::vector<UnitaryMatrix> values);

    std::size_t n() const { return n_; }
    const std::vector<double>& grid() const { return grid_; }
    bool refinable() const { return static_cast<bool>(value_); }
    // Values on `grid`; for sampled loops `grid` must be the node grid.
    std::vector<UnitaryMatrix> values_on(const std::vector<double>& grid) const;

private:
    std::size_t n_ = 0;
    std::vector<double> grid_;
    Fn value_;
    std::vector<UnitaryMatrix> samples_;
};

namespace universal {

inline constexpr std::size_t kMinNodes = 16;

// {θ_j + 2πk} ∩ [a, b], sorted, with multiplicity.
std::vector<double> exact_spectrum(const UnitaryMatrix& u, double a, double b);

// mN x mN matrix of -i d/dt on the nodes t_j = j/m by centered
// differences, with f_m = U f_0 and f_{-1} = U* f_{m-1}.
HermitianMatrix discretize_operator(const UnitaryMatrix& u, std::size_t m);

// Eigenvalues of the discretization split into modes that vary smoothly
// from node to node and the sawtooth modes mirroring them.
struct DiscreteSpectrum {
    std::vector<double> physical;  // sorted
    std::vector<double> doublers;  // sorted
};
DiscreteSpectrum discrete_spectrum(const UnitaryMatrix& u, std::size_t m);

// Largest distance from an exact eigenvalue in [a, b] to the nearest
// physical discrete eigenvalue.
double spectrum_error(const UnitaryMatrix& u, std::size_t m, double a, double b);
// log2(error(m) / error(2m)).
double convergence_order(const UnitaryMatrix& u, std::size_t m, double a, double b);

// Signed count of eigenphases of U_t passing through 0 mod 2π, i.e. the
// spectral flow of the exact family.
FlowResult universal_loop_flow(const UnitaryLoop& loop, const Tolerance& tol = {});
// The same count read from the N physical eigenvalues nearest 0 of the
// m-node discretization at each node of the loop grid.
FlowResult discretized_loop_flow(const UnitaryLoop& loop, std::size_t m, const Tolerance& tol = {});

// (1 - 3U)(3 - U)^{-1}.
UnitaryMatrix universal_reduction(const UnitaryMatrix& u);
// span of the columns of [i(1 - U); (1 + U)/2].
LagrangianFrame reduced_lagrangian(const UnitaryMatrix& u);

}  // namespace universal
}  // namespace lagflow

// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

// Spectral flow of paths of Hermitian matrices over [0, 1] and the Maslov
// index of paths of lagrangians with respect to H-.
//
// Crossings are counted in the open interval; paths whose endpoints are
// not invertible (resp. not transversal to H-) are rejected.

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "lagflow/grassmann.hpp"

namespace lagflow {

// Default interval count for closed-form paths. Odd, so that t = 1/2 is not a
// node.
inline constexpr std::size_t kDefaultIntervals = 61;

std::vector<double> uniform_grid(std::size_t intervals);
// Throws InputError unless the grid is strictly increasing from 0 to 1;
// snaps the ends to exactly 0 and 1.
void validate_unit_grid(std::vector<double>& grid);
// Inserts the midpoint of every interval.
std::vector<double> halved_grid(const std::vector<double>& grid);

class HermitianPath {
public:
    using Fn = std::function<HermitianMatrix(double)>;

    HermitianPath() = default;
    // `derivative` may be empty; it is then replaced by central differences.
    static HermitianPath from_function(Fn value, Fn derivative, std::vector<double> grid);
    static HermitianPath affine(const HermitianMatrix& a0, const HermitianMatrix& a1,
                                std::size_t intervals = kDefaultIntervals);
    // Piecewise linear interpolation, or cubic Hermite when derivatives are
    // given.
    static HermitianPath sampled(std::vector<double> grid, std::vector<HermitianMatrix> values,
                                 std::vector<HermitianMatrix> derivatives = {});

    std::size_t dim() const { return dim_; }
    const std::vector<double>& grid() const { return grid_; }
    HermitianMatrix value(double t) const { return value_(t); }
    HermitianMatrix derivative(double t) const;
    bool has_analytic_derivative() const { return static_cast<bool>(derivative_); }

    // The path on [a, b], reparametrized linearly onto [0, 1].
    HermitianPath restricted(double a, double b) const;
    // Same path, grid with every interval halved.
    HermitianPath refined() const;

private:
    std::size_t dim_ = 0;
    std::vector<double> grid_;
    Fn value_;
    Fn derivative_;
};

class LagrangianPath {
public:
    using Fn = std::function<LagrangianFrame(double)>;

    LagrangianPath() = default;
    // Refines `grid` until consecutive frames are closer than 0.5.
    static LagrangianPath from_function(Fn value, std::vector<double> grid);
    // Interpolates in the Arnold chart of the left node of each interval.
    // Throws InputError when consecutive frames are 0.5 or further apart.
    static LagrangianPath sampled(std::vector<double> grid, std::vector<LagrangianFrame> frames);
    // t -> switched graph of A_t.
    static LagrangianPath switched_graphs(const HermitianPath& path);

    std::size_t n() const { return n_; }
    const std::vector<double>& grid() const { return grid_; }
    LagrangianFrame value(double t) const { return value_(t); }

private:
    std::size_t n_ = 0;
    std::vector<double> grid_;
    Fn value_;
};

struct Crossing {
    double t;
    int sign;
};

struct FlowResult {
    int flow = 0;
    std::vector<Crossing> crossings;
};

// Crossing-form algorithm: each eigenvalue sign change is bisected and its
// sign read off the derivative on the kernel.
FlowResult spectral_flow_crossing(const HermitianPath& path, const Tolerance& tol = {});

// Eigenvalue tracking on successively halved grids; crossings carry the
// linearly interpolated zero of the branch.
FlowResult spectral_flow_tracking(const HermitianPath& path);

FlowResult maslov_index(const LagrangianPath& path, const Tolerance& tol = {});

// Sorted eigenvalues at each node of `grid`, for plotting.
std::vector<std::vector<double>> eigenvalue_table(const HermitianPath& path, const std::vector<double>& grid);
// Eigenphases of the unitary of each frame, for plotting.
std::vector<std::vector<double>> eigenphase_table(const LagrangianPath& path, const std::vector<double>& grid);

}  // namespace lagflow

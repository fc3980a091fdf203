// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "lagflow/universal.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "lagflow/errors.hpp"

namespace lagflow {

namespace {

const double kPi = std::acos(-1.0);
const double kTwoPi = 2.0 * kPi;
constexpr int kMaxRefinements = 12;

double wrap_angle(double x) {
    x = std::remainder(x, kTwoPi);
    return x <= -kPi ? x + kTwoPi : x;
}

struct GridTooCoarse {};

// Lifts sorted phase lists along the grid and counts signed passages of
// the lifted branches through 2πZ.
FlowResult wind(const std::vector<double>& grid, const std::vector<std::vector<double>>& phases) {
    const std::size_t n = phases[0].size();
    std::vector<double> raw = phases[0];
    std::vector<double> lifted = phases[0];
    FlowResult out;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const std::vector<double>& next = phases[i];
        // Sorted angles keep their cyclic order; only the starting point moves.
        std::size_t best_shift = 0;
        double best_cost = INFINITY;
        for (std::size_t s = 0; s < n; ++s) {
            double cost = 0.0;
            for (std::size_t j = 0; j < n; ++j) cost += std::abs(wrap_angle(next[(j + s) % n] - raw[j]));
            if (cost < best_cost) best_cost = cost, best_shift = s;
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double target = next[(j + best_shift) % n];
            const double step = wrap_angle(target - raw[j]);
            if (std::abs(step) >= 0.5 * kPi) throw GridTooCoarse{};
            const double a = lifted[j], b = a + step;
            const double ka = std::floor(a / kTwoPi), kb = std::floor(b / kTwoPi);
            if (kb != ka) {
                const double level = kTwoPi * std::max(ka, kb);
                const double t = grid[i - 1] + (grid[i] - grid[i - 1]) * (level - a) / (b - a);
                const int sign = kb > ka ? 1 : -1;
                out.flow += sign;
                out.crossings.push_back({t, sign});
            }
            raw[j] = target;
            lifted[j] = b;
        }
    }
    std::stable_sort(out.crossings.begin(), out.crossings.end(),
                     [](const Crossing& x, const Crossing& y) { return x.t < y.t; });
    return out;
}

// Refines function-backed loops until (flow, crossing count) repeats on two
// consecutive halvings; sampled loops are evaluated once.
FlowResult refine_winding(const UnitaryLoop& loop,
                          const std::function<std::vector<double>(const UnitaryMatrix&)>& phases_of) {
    auto on = [&](const std::vector<double>& grid) {
        std::vector<std::vector<double>> ph;
        for (const UnitaryMatrix& u : loop.values_on(grid)) ph.push_back(phases_of(u));
        return wind(grid, ph);
    };
    std::vector<double> grid = loop.grid();
    if (!loop.refinable()) {
        try {
            return on(grid);
        } catch (const GridTooCoarse&) {
            throw PreconditionError("grid too coarse");
        }
    }
    bool have_prev = false;
    FlowResult prev;
    int stable = 0;
    for (int level = 0; level <= kMaxRefinements; ++level) {
        try {
            FlowResult cur = on(grid);
            if (have_prev && cur.flow == prev.flow && cur.crossings.size() == prev.crossings.size()) {
                if (++stable == 2) return cur;
            } else {
                stable = 0;
            }
            prev = std::move(cur);
            have_prev = true;
        } catch (const GridTooCoarse&) {
            have_prev = false;
            stable = 0;
        }
        grid = halved_grid(grid);
    }
    throw PreconditionError("grid too coarse");
}

void check_loop_endpoints(const UnitaryLoop& loop, const Tolerance& tol) {
    const std::vector<UnitaryMatrix> ends = loop.values_on({0.0, 1.0});
    if ((ends[0].matrix() - ends[1].matrix()).max_abs() > 1e-8) throw InputError("loop endpoints differ");
    for (double th : linalg::unitary_eig(ends[0].matrix()).phases)
        if (std::abs(th) <= tol.crossing_eps) throw PreconditionError("degenerate endpoint");
}

Eigen::MatrixXcd to_eigen(const Matrix& m) {
    Eigen::MatrixXcd e(m.rows(), m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) e(i, j) = m(i, j);
    return e;
}

}  // namespace

UnitaryLoop UnitaryLoop::from_function(Fn value, std::vector<double> grid) {
    if (!value) throw InputError("loop has no value function");
    validate_unit_grid(grid);
    UnitaryLoop l;
    l.n_ = value(0.0).n();
    l.grid_ = std::move(grid);
    l.value_ = std::move(value);
    return l;
}

UnitaryLoop UnitaryLoop::sampled(std::vector<double> grid, std::vector<UnitaryMatrix> values) {
    validate_unit_grid(grid);
    if (values.size() != grid.size()) throw InputError("loop needs one unitary per grid node");
    for (const auto& u : values)
        if (u.n() != values[0].n()) throw InputError("loop unitaries differ in size");
    UnitaryLoop l;
    l.n_ = values[0].n();
    l.grid_ = std::move(grid);
    l.samples_ = std::move(values);
    return l;
}

std::vector<UnitaryMatrix> UnitaryLoop::values_on(const std::vector<double>& grid) const {
    std::vector<UnitaryMatrix> out;
    if (value_) {
        for (double t : grid) out.push_back(value_(t));
        return out;
    }
    for (double t : grid) {
        const auto it = std::lower_bound(grid_.begin(), grid_.end(), t - 1e-14);
        if (it == grid_.end() || std::abs(*it - t) > 1e-14) throw InputError("sampled loop has no value off its grid");
        out.push_back(samples_[static_cast<std::size_t>(it - grid_.begin())]);
    }
    return out;
}

namespace universal {

std::vector<double> exact_spectrum(const UnitaryMatrix& u, double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || a > b) throw InputError("window must be finite with a <= b");
    std::vector<double> out;
    for (double th : linalg::unitary_eig(u.matrix()).phases) {
        const double k0 = std::ceil((a - th) / kTwoPi), k1 = std::floor((b - th) / kTwoPi);
        for (double k = k0; k <= k1; k += 1.0) out.push_back(th + kTwoPi * k);
    }
    std::sort(out.begin(), out.end());
    return out;
}

HermitianMatrix discretize_operator(const UnitaryMatrix& u, std::size_t m) {
    if (m < kMinNodes) throw InputError("discretization needs at least 16 nodes");
    const std::size_t n = u.n();
    const cplx c(0.0, 0.5 * static_cast<double>(m));  // i / (2h)
    Matrix d(m * n, m * n);
    for (std::size_t j = 0; j + 1 < m; ++j)
        for (std::size_t r = 0; r < n; ++r) {
            d(j * n + r, (j + 1) * n + r) = -c;
            d((j + 1) * n + r, j * n + r) = c;
        }
    d.set_block((m - 1) * n, 0, u.matrix() * -c);
    d.set_block(0, (m - 1) * n, u.matrix().adjoint() * c);
    return HermitianMatrix(d);
}

DiscreteSpectrum discrete_spectrum(const UnitaryMatrix& u, std::size_t m) {
    const std::size_t n = u.n();
    const HermitianMatrix d = discretize_operator(u, m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(d.matrix()));
    if (es.info() != Eigen::Success) throw NumericalError("eig failure");
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Eigen::MatrixXcd& vec = es.eigenvectors();
    const std::size_t size = m * n;
    const Eigen::MatrixXcd uu = to_eigen(u.matrix());

    // Twisted shift (S f)_j = f_{j+1}, f_m = U f_0. On a cluster of equal
    // eigenvalues the quadratic form Re <S x, x> is diagonalized; its sign
    // separates smooth modes (> 0) from sawtooth ones.
    auto shift = [&](const Eigen::MatrixXcd& x) {
        Eigen::MatrixXcd y(size, x.cols());
        y.topRows(size - n) = x.bottomRows(size - n);
        y.bottomRows(n) = uu * x.topRows(n);
        return y;
    };
    DiscreteSpectrum out;
    const double cluster = 1e-9 * static_cast<double>(m);
    for (std::size_t i = 0; i < size;) {
        std::size_t j = i + 1;
        while (j < size && lam(j) - lam(j - 1) <= cluster) ++j;
        const Eigen::MatrixXcd x = vec.middleCols(i, j - i);
        const Eigen::MatrixXcd g = x.adjoint() * shift(x);
        const Eigen::MatrixXcd form = 0.5 * (g + g.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> fs(form, Eigen::EigenvaluesOnly);
        for (std::size_t k = 0; k < j - i; ++k)
            (fs.eigenvalues()(k) > 0.0 ? out.physical : out.doublers).push_back(lam(i + k));
        i = j;
    }
    std::sort(out.physical.begin(), out.physical.end());
    std::sort(out.doublers.begin(), out.doublers.end());
    return out;
}

double spectrum_error(const UnitaryMatrix& u, std::size_t m, double a, double b) {
    const std::vector<double> exact = exact_spectrum(u, a, b);
    const std::vector<double> disc = discrete_spectrum(u, m).physical;
    double err = 0.0;
    for (double e : exact) {
        double best = INFINITY;
        for (double x : disc) best = std::min(best, std::abs(x - e));
        err = std::max(err, best);
    }
    return err;
}

double convergence_order(const UnitaryMatrix& u, std::size_t m, double a, double b) {
    return std::log2(spectrum_error(u, m, a, b) / spectrum_error(u, 2 * m, a, b));
}

FlowResult universal_loop_flow(const UnitaryLoop& loop, const Tolerance& tol) {
    tol.validate();
    check_loop_endpoints(loop, tol);
    return refine_winding(loop, [](const UnitaryMatrix& u) { return linalg::unitary_eig(u.matrix()).phases; });
}

FlowResult discretized_loop_flow(const UnitaryLoop& loop, std::size_t m, const Tolerance& tol) {
    tol.validate();
    check_loop_endpoints(loop, tol);
    const std::size_t n = loop.n();
    return refine_winding(loop, [m, n](const UnitaryMatrix& u) {
        std::vector<double> phys = discrete_spectrum(u, m).physical;
        std::partial_sort(phys.begin(), phys.begin() + static_cast<std::ptrdiff_t>(n), phys.end(),
                          [](double x, double y) { return std::abs(x) < std::abs(y); });
        std::vector<double> ph;
        for (std::size_t j = 0; j < n; ++j) ph.push_back(wrap_angle(phys[j]));
        std::sort(ph.begin(), ph.end());
        return ph;
    });
}

UnitaryMatrix universal_reduction(const UnitaryMatrix& u) {
    const Matrix id = Matrix::identity(u.n());
    const Matrix& x = u.matrix();
    // (1 - 3U)(3 - U)^{-1} = ((3 - U)^{-*} (1 - 3U)^*)^*
    const Matrix r = linalg::solve((id * 3.0 - x).adjoint(), (id - x * 3.0).adjoint()).adjoint();
    return UnitaryMatrix(r, 1e-10);
}

LagrangianFrame reduced_lagrangian(const UnitaryMatrix& u) {
    const Matrix id = Matrix::identity(u.n());
    const Matrix& x = u.matrix();
    return LagrangianFrame::from_spanning(vcat((id - x) * cplx(0.0, 1.0), (id + x) * 0.5));
}

}  // namespace universal
}  // namespace lagflow

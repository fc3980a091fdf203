// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "lagflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "lagflow/errors.hpp"

namespace lagflow {

namespace {

constexpr int kMaxSplitDepth = 40;
constexpr int kMaxRefinements = 12;
constexpr double kBisectionWidth = 1e-14;
constexpr double kMaxFrameStep = 0.5;
// Intervals are split slightly off centre so that symmetric grids do not
// sample a symmetric path exactly at its centre.
constexpr double kSplitFraction = 0.5123;

std::size_t interval_of(const std::vector<double>& grid, double t) {
    const auto it = std::upper_bound(grid.begin(), grid.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - grid.begin());
    if (k == 0) return 0;
    return std::min(k - 1, grid.size() - 2);
}

double local_step(const std::vector<double>& grid, double t) {
    const std::size_t i = interval_of(grid, t);
    return std::min(grid[i + 1] - grid[i], 1e-4);
}

// Central difference with one Richardson step.
template <class F>
Matrix central_difference(const F& f, double t, double h) {
    auto d = [&](double s) { return (f(t + s) - f(t - s)) * cplx(0.5 / s); };
    return (d(0.5 * h) * cplx(4.0) - d(h)) * cplx(1.0 / 3.0);
}

int negative_count(const std::vector<double>& ev) {
    return static_cast<int>(std::count_if(ev.begin(), ev.end(), [](double x) { return x < 0.0; }));
}

double min_abs(const std::vector<double>& ev) {
    double m = INFINITY;
    for (double x : ev) m = std::min(m, std::abs(x));
    return m;
}

// Finds the parameters where a sorted eigenvalue branch of a Hermitian
// family changes sign. Intervals are split while some branch could reach
// zero and come back between the endpoints; the reach is bounded by a
// Lipschitz estimate from three samples.
struct Candidate {
    double t;
    std::size_t branch;
    int direction;  // +1: a negative eigenvalue became nonnegative
};

class SignChangeFinder {
public:
    explicit SignChangeFinder(std::function<HermitianMatrix(double)> f) : f_(std::move(f)) {}

    std::vector<Candidate> run(const std::vector<double>& grid) {
        out_.clear();
        Sample prev = sample(grid[0]);
        for (std::size_t i = 1; i < grid.size(); ++i) {
            Sample next = sample(grid[i]);
            interval(prev, next, 0);
            prev = std::move(next);
        }
        return out_;
    }

private:
    struct Sample {
        double t;
        HermitianMatrix a;
        std::vector<double> ev;
        int neg;
    };

    Sample sample(double t) const {
        Sample s{t, f_(t), {}, 0};
        s.ev = linalg::hermitian_eigvals(s.a);
        s.neg = negative_count(s.ev);
        return s;
    }

    void interval(const Sample& a, const Sample& b, int depth) {
        const double h = b.t - a.t;
        const double tm = a.t + kSplitFraction * h;
        HermitianMatrix am = f_(tm);
        const double lip = 1.5 * std::max({(b.a - a.a).matrix().frobenius() / h,
                                           (am - a.a).matrix().frobenius() / (tm - a.t),
                                           (b.a - am).matrix().frobenius() / (b.t - tm)});
        bool hazard = false;
        for (std::size_t j = 0; j < a.ev.size() && !hazard; ++j) {
            const bool same_side = (a.ev[j] < 0.0) == (b.ev[j] < 0.0);
            if (same_side && std::abs(a.ev[j]) + std::abs(b.ev[j]) <= lip * h) hazard = true;
        }
        const int jump = std::abs(a.neg - b.neg);
        if (jump == 0 && !hazard) return;
        if ((hazard || jump >= 2) && depth < kMaxSplitDepth) {
            Sample m{tm, std::move(am), {}, 0};
            m.ev = linalg::hermitian_eigvals(m.a);
            m.neg = negative_count(m.ev);
            interval(a, m, depth + 1);
            interval(m, b, depth + 1);
            return;
        }
        // A touch below resolution contributes nothing.
        if (jump == 0) return;
        if (jump >= 2) throw PreconditionError("degenerate crossing");
        const std::size_t j = static_cast<std::size_t>(std::min(a.neg, b.neg));
        const bool left_negative = a.ev[j] < 0.0;
        double lo = a.t, hi = b.t;
        for (int it = 0; it < 200 && hi - lo > kBisectionWidth; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double lam = linalg::hermitian_eigvals(f_(mid))[j];
            if ((lam < 0.0) == left_negative)
                lo = mid;
            else
                hi = mid;
        }
        out_.push_back({0.5 * (lo + hi), j, a.neg > b.neg ? 1 : -1});
    }

    std::function<HermitianMatrix(double)> f_;
    std::vector<Candidate> out_;
};

}  // namespace

void validate_unit_grid(std::vector<double>& grid) {
    if (grid.size() < 2) throw InputError("grid needs at least two nodes");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw InputError("non-finite grid node");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw InputError("grid must be strictly increasing");
    }
    if (std::abs(grid.front()) > 1e-12 || std::abs(grid.back() - 1.0) > 1e-12)
        throw InputError("grid must start at 0 and end at 1");
    grid.front() = 0.0;
    grid.back() = 1.0;
}

std::vector<double> halved_grid(const std::vector<double>& grid) {
    std::vector<double> out;
    out.reserve(2 * grid.size() - 1);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        out.push_back(grid[i]);
        out.push_back(0.5 * (grid[i] + grid[i + 1]));
    }
    out.push_back(grid.back());
    return out;
}

std::vector<double> uniform_grid(std::size_t intervals) {
    if (intervals == 0) throw InputError("grid needs at least one interval");
    std::vector<double> g(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) g[i] = static_cast<double>(i) / static_cast<double>(intervals);
    g.back() = 1.0;
    return g;
}

HermitianPath HermitianPath::from_function(Fn value, Fn derivative, std::vector<double> grid) {
    if (!value) throw InputError("path has no value function");
    validate_unit_grid(grid);
    HermitianPath p;
    p.dim_ = value(0.0).dim();
    if (p.dim_ == 0) throw InputError("path of 0 x 0 matrices");
    p.grid_ = std::move(grid);
    p.value_ = std::move(value);
    p.derivative_ = std::move(derivative);
    return p;
}

HermitianPath HermitianPath::affine(const HermitianMatrix& a0, const HermitianMatrix& a1, std::size_t intervals) {
    if (a0.dim() != a1.dim()) throw InputError("affine path matrices differ in size");
    return from_function([a0, a1](double t) { return a0 + a1 * t; }, [a1](double) { return a1; },
                         uniform_grid(intervals));
}

HermitianPath HermitianPath::sampled(std::vector<double> grid, std::vector<HermitianMatrix> values,
                                     std::vector<HermitianMatrix> derivatives) {
    validate_unit_grid(grid);
    if (values.size() != grid.size()) throw InputError("path needs one value per grid node");
    if (!derivatives.empty() && derivatives.size() != grid.size())
        throw InputError("path needs one derivative per grid node");
    const std::size_t n = values[0].dim();
    for (const auto& v : values)
        if (v.dim() != n) throw InputError("path values differ in size");
    for (const auto& d : derivatives)
        if (d.dim() != n) throw InputError("path derivatives differ in size");

    struct Data {
        std::vector<double> grid;
        std::vector<HermitianMatrix> values, derivatives;
    };
    auto data = std::make_shared<const Data>(Data{grid, std::move(values), std::move(derivatives)});
    Fn value, derivative;
    if (data->derivatives.empty()) {
        value = [data](double t) {
            const std::size_t i = interval_of(data->grid, t);
            const double s = (t - data->grid[i]) / (data->grid[i + 1] - data->grid[i]);
            return data->values[i] + (data->values[i + 1] - data->values[i]) * s;
        };
        derivative = [data](double t) {
            const std::size_t i = interval_of(data->grid, t);
            return (data->values[i + 1] - data->values[i]) * (1.0 / (data->grid[i + 1] - data->grid[i]));
        };
    } else {
        value = [data](double t) {
            const std::size_t i = interval_of(data->grid, t);
            const double h = data->grid[i + 1] - data->grid[i];
            const double s = (t - data->grid[i]) / h;
            const double s2 = s * s, s3 = s2 * s;
            return data->values[i] * (2 * s3 - 3 * s2 + 1) + data->derivatives[i] * (h * (s3 - 2 * s2 + s)) +
                   data->values[i + 1] * (-2 * s3 + 3 * s2) + data->derivatives[i + 1] * (h * (s3 - s2));
        };
        derivative = [data](double t) {
            const std::size_t i = interval_of(data->grid, t);
            const double h = data->grid[i + 1] - data->grid[i];
            const double s = (t - data->grid[i]) / h;
            const double s2 = s * s;
            return data->values[i] * ((6 * s2 - 6 * s) / h) + data->derivatives[i] * (3 * s2 - 4 * s + 1) +
                   data->values[i + 1] * ((-6 * s2 + 6 * s) / h) + data->derivatives[i + 1] * (3 * s2 - 2 * s);
        };
    }
    return from_function(std::move(value), std::move(derivative), std::move(grid));
}

HermitianMatrix HermitianPath::derivative(double t) const {
    if (derivative_) return derivative_(t);
    return HermitianMatrix(central_difference([this](double s) { return value_(s).matrix(); }, t,
                                              local_step(grid_, t)));
}

HermitianPath HermitianPath::restricted(double a, double b) const {
    if (!(0.0 <= a && a < b && b <= 1.0)) throw InputError("restriction needs 0 <= a < b <= 1");
    const double w = b - a;
    std::vector<double> g{0.0};
    for (double t : grid_)
        if (t > a && t < b && (t - a) / w > g.back() + 1e-14 && (t - a) / w < 1.0 - 1e-14) g.push_back((t - a) / w);
    g.push_back(1.0);
    Fn value = [f = value_, a, w](double s) { return f(a + s * w); };
    Fn derivative;
    if (derivative_) derivative = [d = derivative_, a, w](double s) { return d(a + s * w) * w; };
    return from_function(std::move(value), std::move(derivative), std::move(g));
}

HermitianPath HermitianPath::refined() const {
    HermitianPath p = *this;
    p.grid_ = halved_grid(grid_);
    return p;
}

LagrangianPath LagrangianPath::from_function(Fn value, std::vector<double> grid) {
    if (!value) throw InputError("path has no value function");
    validate_unit_grid(grid);
    std::vector<LagrangianFrame> frames;
    for (double t : grid) frames.push_back(value(t));
    for (int level = 0;; ++level) {
        std::vector<double> g{grid[0]};
        std::vector<LagrangianFrame> f{frames[0]};
        bool split = false;
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            if (linalg::subspace_distance(frames[i].frame(), frames[i + 1].frame()) >= kMaxFrameStep) {
                const double tm = 0.5 * (grid[i] + grid[i + 1]);
                g.push_back(tm);
                f.push_back(value(tm));
                split = true;
            }
            g.push_back(grid[i + 1]);
            f.push_back(frames[i + 1]);
        }
        grid = std::move(g);
        frames = std::move(f);
        if (!split) break;
        if (level == 20) throw PreconditionError("grid too coarse");
    }
    LagrangianPath p;
    p.n_ = frames[0].n();
    for (const auto& f : frames)
        if (f.n() != p.n_) throw InputError("path frames differ in size");
    p.grid_ = std::move(grid);
    p.value_ = std::move(value);
    return p;
}

LagrangianPath LagrangianPath::sampled(std::vector<double> grid, std::vector<LagrangianFrame> frames) {
    validate_unit_grid(grid);
    if (frames.size() != grid.size()) throw InputError("path needs one frame per grid node");
    const std::size_t n = frames[0].n();
    std::vector<HermitianMatrix> steps;
    for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
        if (frames[i + 1].n() != n) throw InputError("path frames differ in size");
        if (linalg::subspace_distance(frames[i].frame(), frames[i + 1].frame()) >= kMaxFrameStep)
            throw InputError("consecutive frames are too far apart");
        steps.push_back(grassmann::chart_coordinates(frames[i + 1], frames[i]));
    }
    struct Data {
        std::vector<double> grid;
        std::vector<LagrangianFrame> frames;
        std::vector<HermitianMatrix> steps;
    };
    auto data = std::make_shared<const Data>(Data{grid, std::move(frames), std::move(steps)});
    LagrangianPath p;
    p.n_ = n;
    p.grid_ = std::move(grid);
    p.value_ = [data](double t) {
        const std::size_t i = interval_of(data->grid, t);
        const double s = (t - data->grid[i]) / (data->grid[i + 1] - data->grid[i]);
        return grassmann::chart_point(data->frames[i], data->steps[i] * s);
    };
    return p;
}

LagrangianPath LagrangianPath::switched_graphs(const HermitianPath& path) {
    return from_function([path](double t) { return grassmann::switched_graph(path.value(t)); }, path.grid());
}

FlowResult spectral_flow_crossing(const HermitianPath& path, const Tolerance& tol) {
    tol.validate();
    if (min_abs(linalg::hermitian_eigvals(path.value(0.0))) <= tol.crossing_eps ||
        min_abs(linalg::hermitian_eigvals(path.value(1.0))) <= tol.crossing_eps)
        throw PreconditionError("degenerate endpoint");

    SignChangeFinder finder([&path](double t) { return path.value(t); });
    FlowResult out;
    for (const Candidate& c : finder.run(path.grid())) {
        const linalg::EigenDecomposition e = linalg::hermitian_eig(path.value(c.t));
        double scale = 1.0;
        for (double x : e.values) scale = std::max(scale, std::abs(x));
        const double thr = tol.rank_eps * scale;
        if (std::count_if(e.values.begin(), e.values.end(), [thr](double x) { return std::abs(x) <= thr; }) > 1)
            throw PreconditionError("degenerate crossing");
        const Matrix v = e.vectors.columns(c.branch, 1);
        const double form = adjoint_times(v, path.derivative(c.t).matrix() * v)(0, 0).real();
        if (std::abs(form) <= tol.crossing_eps) throw PreconditionError("degenerate crossing");
        const int sign = form > 0.0 ? 1 : -1;
        if (sign != c.direction) throw PreconditionError("degenerate crossing");
        out.flow += sign;
        out.crossings.push_back({c.t, sign});
    }
    return out;
}

namespace {

FlowResult track_on(const HermitianPath& path, const std::vector<double>& grid) {
    FlowResult out;
    std::vector<double> prev = linalg::hermitian_eigvals(path.value(grid[0]));
    for (std::size_t i = 1; i < grid.size(); ++i) {
        // Sorted order is the minimal total-displacement matching of two
        // real spectra.
        std::vector<double> next = linalg::hermitian_eigvals(path.value(grid[i]));
        for (std::size_t j = 0; j < next.size(); ++j) {
            const double a = prev[j], b = next[j];
            if ((a < 0.0) == (b < 0.0)) continue;
            const double t = grid[i - 1] + (grid[i] - grid[i - 1]) * a / (a - b);
            out.crossings.push_back({t, a < 0.0 ? 1 : -1});
            out.flow += out.crossings.back().sign;
        }
        prev = std::move(next);
    }
    std::stable_sort(out.crossings.begin(), out.crossings.end(),
                     [](const Crossing& x, const Crossing& y) { return x.t < y.t; });
    return out;
}

}  // namespace

FlowResult spectral_flow_tracking(const HermitianPath& path) {
    const Tolerance tol;
    if (min_abs(linalg::hermitian_eigvals(path.value(0.0))) <= tol.crossing_eps ||
        min_abs(linalg::hermitian_eigvals(path.value(1.0))) <= tol.crossing_eps)
        throw PreconditionError("degenerate endpoint");
    std::vector<double> grid = path.grid();
    FlowResult prev = track_on(path, grid);
    int stable = 0;
    for (int level = 1; level <= kMaxRefinements; ++level) {
        grid = halved_grid(grid);
        FlowResult cur = track_on(path, grid);
        if (cur.flow == prev.flow && cur.crossings.size() == prev.crossings.size()) {
            if (++stable == 2) return cur;
        } else {
            stable = 0;
        }
        prev = std::move(cur);
    }
    throw PreconditionError("grid too coarse");
}

FlowResult maslov_index(const LagrangianPath& path, const Tolerance& tol) {
    tol.validate();
    const std::size_t n = path.n();
    const Matrix hminus = grassmann::standard_lagrangians(n).second.frame();
    if (linalg::subspace_intersection_dim(path.value(0.0).frame(), hminus, tol) > 0 ||
        linalg::subspace_intersection_dim(path.value(1.0).frame(), hminus, tol) > 0)
        throw PreconditionError("degenerate endpoint");

    // Eigenvalues e^{iθ} of the unitary cross -1 exactly where sin θ changes
    // sign with cos θ < 0.
    auto unitary = [&path](double t) { return grassmann::lagrangian_to_unitary(path.value(t)).matrix(); };
    auto detector = [&unitary](double t) {
        const Matrix u = unitary(t);
        return HermitianMatrix((u - u.adjoint()) * cplx(0.0, -0.5));
    };
    SignChangeFinder finder(detector);
    FlowResult out;
    for (const Candidate& c : finder.run(path.grid())) {
        const Matrix u = unitary(c.t);
        const linalg::EigenDecomposition e = linalg::hermitian_eig(detector(c.t));
        const Matrix w = e.vectors.columns(c.branch, 1);
        if (adjoint_times(w, u * w)(0, 0).real() >= 0.0) continue;

        const Matrix k = linalg::subspace_intersection(path.value(c.t).frame(), hminus, tol);
        if (k.cols() != 1) throw PreconditionError("degenerate crossing");
        const Matrix pdot = central_difference(
            [&path](double s) { return linalg::projector(path.value(s).frame()); }, c.t, local_step(path.grid(), c.t));
        const Matrix v = k.columns(0, 1);
        const double form = -adjoint_times(v, grassmann::apply_j(pdot * v))(0, 0).real();
        if (std::abs(form) <= tol.crossing_eps) throw PreconditionError("degenerate crossing");
        const int sign = form > 0.0 ? 1 : -1;
        // The phase moves up through π exactly when sin θ goes from + to -.
        if (sign != -c.direction) throw PreconditionError("degenerate crossing");
        out.flow += sign;
        out.crossings.push_back({c.t, sign});
    }
    return out;
}

std::vector<std::vector<double>> eigenvalue_table(const HermitianPath& path, const std::vector<double>& grid) {
    std::vector<std::vector<double>> out;
    for (double t : grid) out.push_back(linalg::hermitian_eigvals(path.value(t)));
    return out;
}

std::vector<std::vector<double>> eigenphase_table(const LagrangianPath& path, const std::vector<double>& grid) {
    std::vector<std::vector<double>> out;
    for (double t : grid) out.push_back(linalg::unitary_eig(grassmann::lagrangian_to_unitary(path.value(t)).matrix()).phases);
    return out;
}

}  // namespace lagflow

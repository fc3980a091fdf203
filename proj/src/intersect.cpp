// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "lagflow/intersect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lagflow/errors.hpp"

namespace lagflow {

namespace {

constexpr double kTrigger = 0.5;
constexpr double kAccept = 1e-6;
constexpr int kSimplexIterations = 200;
constexpr int kSimplexRestarts = 4;

using Entry = std::function<cplx(std::size_t, const Matrix&, const Matrix&)>;

// Builds the row-by-direction determinant for the vectors v, g_1..g_m and
// directions i = 0..rows-1; entry(i, x, y) = <X_i x, y>.
IntersectionResult determinant_sign(std::size_t rows, const Matrix& v, const Matrix& g, const Entry& entry,
                                    const Tolerance& tol) {
    if (rows != 1 + 2 * g.cols()) throw PreconditionError("reduced-space dimension mismatch");
    std::vector<double> a(rows * rows);
    for (std::size_t i = 0; i < rows; ++i) {
        a[i * rows] = entry(i, v, v).real();
        for (std::size_t j = 0; j < g.cols(); ++j) {
            const cplx z = entry(i, g.columns(j, 1), v);
            a[i * rows + 1 + 2 * j] = z.real();
            a[i * rows + 2 + 2 * j] = z.imag();
        }
    }
    IntersectionResult out;
    out.det = linalg::real_determinant(std::move(a), rows);
    if (!(std::abs(out.det) > tol.crossing_eps)) throw PreconditionError("not transversal");
    out.epsilon = out.det > 0 ? 1 : -1;
    return out;
}

// v spanning L ∩ W and an orthonormal basis of (L ∩ W^ω) ⊖ v.
std::pair<Matrix, Matrix> localized_vectors(const LagrangianFrame& l, const IsotropicSubspace& w, std::size_t k,
                                            const Tolerance& tol) {
    const Matrix v = linalg::subspace_intersection(l.frame(), w.ambient_frame(), tol);
    if (v.cols() != 1) throw PreconditionError("not localized");
    const Matrix lw = reduction::intersect_annihilator(l, w, tol);
    if (lw.cols() != k) throw PreconditionError("reduced-space dimension mismatch");
    if (k == 1) return {v, Matrix(v.rows(), 0)};
    const Matrix rest = lw - v * adjoint_times(v, lw);
    const Matrix g = linalg::numeric_range(rest, tol);
    if (g.cols() != k - 1) throw PreconditionError("reduced-space dimension mismatch");
    return {v, g};
}

void check_isotropic_codim(const IsotropicSubspace& w, std::size_t n, std::size_t k) {
    if (k == 0) throw InputError("k must be at least 1");
    if (w.ambient_n() != n) throw InputError("W lives in a different space");
    if (w.codim_in_hminus() != k - 1) throw InputError("W must have codimension k - 1");
}

double detector(const LagrangianFrame& l, const Matrix& w_amb) {
    return linalg::sigma_min(hcat(l.frame(), w_amb * cplx(-1.0)));
}

// Nelder-Mead with the standard coefficients; returns the best vertex.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                                const std::vector<double>& step, int iterations, double* best_value) {
    const std::size_t d = x0.size();
    std::vector<std::vector<double>> s(d + 1, x0);
    for (std::size_t i = 0; i < d; ++i) s[i + 1][i] += step[i];
    std::vector<double> fv(d + 1);
    for (std::size_t i = 0; i <= d; ++i) fv[i] = f(s[i]);
    std::vector<std::size_t> order(d + 1);
    auto combine = [&](const std::vector<double>& c, const std::vector<double>& x, double t) {
        std::vector<double> y(d);
        for (std::size_t i = 0; i < d; ++i) y[i] = c[i] + t * (x[i] - c[i]);
        return y;
    };
    for (int it = 0; it < iterations; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0], worst = order[d], second = order[d - 1];
        if (fv[best] == 0.0) break;
        double size = 0.0;
        for (std::size_t i = 0; i <= d; ++i)
            for (std::size_t j = 0; j < d; ++j) size = std::max(size, std::abs(s[i][j] - s[best][j]));
        if (size < 1e-15) break;
        std::vector<double> c(d, 0.0);
        for (std::size_t i = 0; i <= d; ++i)
            if (i != worst)
                for (std::size_t j = 0; j < d; ++j) c[j] += s[i][j] / static_cast<double>(d);
        const std::vector<double> xr = combine(c, s[worst], -1.0);
        const double fr = f(xr);
        if (fr < fv[best]) {
            const std::vector<double> xe = combine(c, s[worst], -2.0);
            const double fe = f(xe);
            if (fe < fr)
                s[worst] = xe, fv[worst] = fe;
            else
                s[worst] = xr, fv[worst] = fr;
        } else if (fr < fv[second]) {
            s[worst] = xr, fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            const std::vector<double> xc = combine(c, outside ? xr : s[worst], 0.5);
            const double fc = f(xc);
            if (fc < (outside ? fr : fv[worst])) {
                s[worst] = xc, fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= d; ++i) {
                    if (i == best) continue;
                    s[i] = combine(s[best], s[i], 0.5);
                    fv[i] = f(s[i]);
                }
            }
        }
    }
    const std::size_t best =
        static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    *best_value = fv[best];
    return s[best];
}

}  // namespace

void FamilyJet::validate() const {
    if (k == 0) throw InputError("k must be at least 1");
    const std::size_t n = t0.dim();
    if (n == 0) throw InputError("empty base operator");
    if (partials.size() != 2 * k - 1) throw InputError("jet needs exactly 2k - 1 partial derivatives");
    for (const auto& p : partials)
        if (p.dim() != n) throw InputError("partial derivative size mismatch");
    if (w.rows() != n || w.cols() + (k - 1) != n) throw InputError("W must have codimension k - 1");
}

void LagrangianJet::validate() const {
    check_isotropic_codim(w, l.n(), k);
    if (tangents.size() != 2 * k - 1) throw InputError("jet needs exactly 2k - 1 tangents");
    for (const auto& t : tangents)
        if (t.dim() != l.n()) throw InputError("tangent size mismatch");
}

void ProjectionJet::validate() const {
    check_isotropic_codim(w, l.n(), k);
    if (projection_derivatives.size() != 2 * k - 1) throw InputError("jet needs exactly 2k - 1 tangents");
    for (const auto& t : projection_derivatives)
        if (t.rows() != 2 * l.n() || t.cols() != 2 * l.n()) throw InputError("tangent size mismatch");
}

IntersectionResult intersection_number_lagrangian(const LagrangianJet& jet, const Tolerance& tol) {
    tol.validate();
    jet.validate();
    const auto [v, g] = localized_vectors(jet.l, jet.w, jet.k, tol);
    const Matrix& z = jet.l.frame();
    const Entry entry = [&](std::size_t i, const Matrix& x, const Matrix& y) {
        return adjoint_times(adjoint_times(z, y), jet.tangents[i].matrix() * adjoint_times(z, x))(0, 0);
    };
    IntersectionResult out = determinant_sign(2 * jet.k - 1, v, g, entry, tol);
    out.kernel_dim = linalg::subspace_intersection_dim(z, grassmann::standard_lagrangians(jet.l.n()).second.frame(), tol);
    return out;
}

IntersectionResult intersection_number_projection(const ProjectionJet& jet, const Tolerance& tol) {
    tol.validate();
    jet.validate();
    const auto [v, g] = localized_vectors(jet.l, jet.w, jet.k, tol);
    const Entry entry = [&](std::size_t i, const Matrix& x, const Matrix& y) {
        return -adjoint_times(y, grassmann::apply_j(jet.projection_derivatives[i] * x))(0, 0);
    };
    IntersectionResult out = determinant_sign(2 * jet.k - 1, v, g, entry, tol);
    out.kernel_dim =
        linalg::subspace_intersection_dim(jet.l.frame(), grassmann::standard_lagrangians(jet.l.n()).second.frame(), tol);
    return out;
}

IntersectionResult intersection_number_operator(const FamilyJet& jet, const Tolerance& tol) {
    tol.validate();
    jet.validate();
    const std::size_t k = jet.k;
    const Matrix w = linalg::orthonormalize(jet.w);
    const Matrix& t0 = jet.t0.matrix();

    const Matrix ker = linalg::numeric_kernel(t0, tol);
    const std::size_t p = ker.cols();
    if (p == 0) throw PreconditionError("not localized");
    if (p > k) throw PreconditionError("kernel too large");
    const Matrix phi = linalg::subspace_intersection(ker, w, tol);
    if (phi.cols() != 1) throw PreconditionError("not localized");

    // Vectors of (Ker T0) ⊖ phi, then preimages in (Ker T0)^⊥ of W^⊥ ∩ Ran T0.
    Matrix others = linalg::numeric_range(ker - phi * adjoint_times(phi, ker), tol);
    const Matrix range = linalg::numeric_range(t0, tol);
    const Matrix wt = range.cols() == 0 || w.cols() == w.rows()
                          ? Matrix(t0.rows(), 0)
                          : linalg::subspace_intersection(linalg::orthogonal_complement(w, tol), range, tol);
    if (wt.cols() != k - p) throw PreconditionError("W_T dimension mismatch");
    if (wt.cols() > 0) {
        const linalg::EigenDecomposition e = linalg::hermitian_eig(jet.t0);
        double scale = 1.0;
        for (double x : e.values) scale = std::max(scale, std::abs(x));
        std::vector<cplx> inv;
        for (double x : e.values) inv.push_back(std::abs(x) > tol.rank_eps * scale ? 1.0 / x : 0.0);
        const Matrix pinv = e.vectors * Matrix::diagonal(inv) * e.vectors.adjoint();
        const Matrix psi = linalg::numeric_range(pinv * wt, tol);
        if (psi.cols() != k - p) throw PreconditionError("W_T dimension mismatch");
        others = hcat(others, psi);
    }
    const Entry entry = [&](std::size_t i, const Matrix& x, const Matrix& y) {
        return adjoint_times(y, jet.partials[i].matrix() * x)(0, 0);
    };
    IntersectionResult out = determinant_sign(2 * k - 1, phi, others, entry, tol);
    out.kernel_dim = p;
    return out;
}

LagrangianJet graph_jet(const FamilyJet& jet) {
    jet.validate();
    LagrangianJet out;
    out.k = jet.k;
    out.l = grassmann::switched_graph(jet.t0);
    const std::size_t n = jet.t0.dim();
    const Matrix b = out.l.frame().block(n, 0, n, n);
    for (const auto& d : jet.partials) out.tangents.emplace_back(adjoint_times(b, d.matrix() * b));
    out.w = IsotropicSubspace::from_hminus(jet.w);
    return out;
}

void MeshFamily::validate() const {
    if (lower.empty() || lower.size() != upper.size()) throw InputError("mesh box bounds mismatch");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (!(lower[i] < upper[i])) throw InputError("mesh box must have lower < upper");
    if (nodes < 3) throw InputError("mesh needs at least 3 nodes per axis");
    if (orientation != 1 && orientation != -1) throw InputError("orientation must be +1 or -1");
    if (!value) throw InputError("mesh family has no value function");
}

MeshFamily MeshFamily::of_operators(std::vector<double> lower, std::vector<double> upper, std::size_t nodes,
                                    std::function<HermitianMatrix(const std::vector<double>&)> t) {
    MeshFamily f;
    f.lower = std::move(lower);
    f.upper = std::move(upper);
    f.nodes = nodes;
    f.value = [t = std::move(t)](const std::vector<double>& p) { return grassmann::switched_graph(t(p)); };
    return f;
}

std::vector<LocatedCrossing> locate_crossings(const MeshFamily& family, const IsotropicSubspace& w,
                                              const Tolerance& tol) {
    tol.validate();
    family.validate();
    const std::size_t d = family.dim();
    const std::size_t m = family.nodes;
    const Matrix w_amb = w.ambient_frame();
    std::vector<double> spacing(d);
    for (std::size_t i = 0; i < d; ++i) spacing[i] = (family.upper[i] - family.lower[i]) / static_cast<double>(m - 1);

    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= m;
    auto index_to_point = [&](std::size_t idx, std::vector<std::size_t>& ijk) {
        std::vector<double> p(d);
        for (std::size_t i = 0; i < d; ++i) {
            ijk[i] = idx % m;
            idx /= m;
            p[i] = ijk[i] + 1 == m ? family.upper[i] : family.lower[i] + spacing[i] * static_cast<double>(ijk[i]);
        }
        return p;
    };
    auto f = [&](const std::vector<double>& p) { return detector(family.value(p), w_amb); };

    std::vector<double> values(total);
    std::vector<std::size_t> ijk(d);
    for (std::size_t idx = 0; idx < total; ++idx) values[idx] = f(index_to_point(idx, ijk));

    std::vector<std::vector<double>> candidates;
    std::vector<std::size_t> nb(d);
    for (std::size_t idx = 0; idx < total; ++idx) {
        const std::vector<double> p = index_to_point(idx, ijk);
        bool boundary = false;
        for (std::size_t i = 0; i < d; ++i) boundary = boundary || ijk[i] == 0 || ijk[i] + 1 == m;
        if (boundary) {
            if (values[idx] <= kAccept) throw PreconditionError("boundary crossing");
            continue;
        }
        if (values[idx] >= kTrigger) continue;
        // Strict minimum over the 3^d neighbourhood, ties to the lower index.
        bool is_min = true;
        std::size_t offsets = 1;
        for (std::size_t i = 0; i < d; ++i) offsets *= 3;
        for (std::size_t o = 0; o < offsets && is_min; ++o) {
            std::size_t r = o, other = 0, stride = 1;
            for (std::size_t i = 0; i < d; ++i) {
                const std::size_t delta = r % 3;
                r /= 3;
                other += (ijk[i] + delta - 1) * stride;
                stride *= m;
            }
            if (other == idx) continue;
            if (values[other] < values[idx] || (values[other] == values[idx] && other < idx)) is_min = false;
        }
        if (is_min) candidates.push_back(p);
    }

    std::vector<LocatedCrossing> found;
    for (const auto& start : candidates) {
        std::vector<double> x = start;
        std::vector<double> step(d);
        for (std::size_t i = 0; i < d; ++i) step[i] = 0.5 * spacing[i];
        double fx = f(x);
        for (int round = 0; round < kSimplexRestarts && fx > 1e-15; ++round) {
            double fy;
            std::vector<double> y = nelder_mead(f, x, step, kSimplexIterations, &fy);
            if (fy < fx) x = std::move(y), fx = fy;
            for (double& s : step) s *= 0.01;
        }
        if (fx > kAccept) continue;
        for (std::size_t i = 0; i < d; ++i)
            if (!(x[i] > family.lower[i] && x[i] < family.upper[i])) throw PreconditionError("boundary crossing");

        auto distance = [&](const std::vector<double>& a, const std::vector<double>& b) {
            double r = 0.0;
            for (std::size_t i = 0; i < d; ++i) r = std::max(r, std::abs(a[i] - b[i]) / spacing[i]);
            return r;
        };
        bool merged = false;
        for (auto& c : found) {
            const double dist = distance(c.point, x);
            if (dist <= 1e-3) {
                if (fx < c.residual) c = {x, fx};
                merged = true;
                break;
            }
            if (dist < 1.0) throw PreconditionError("unresolved cluster");
        }
        if (!merged) found.push_back({x, fx});
    }
    return found;
}

LagrangianJet family_jet(const MeshFamily& family, const std::vector<double>& point, const IsotropicSubspace& w) {
    family.validate();
    const std::size_t d = family.dim();
    if (point.size() != d) throw InputError("point dimension mismatch");
    if (d % 2 == 0) throw InputError("family must have an odd number of parameters");
    LagrangianJet jet;
    jet.k = (d + 1) / 2;
    jet.l = family.value(point);
    jet.w = w;
    for (std::size_t i = 0; i < d; ++i) {
        const double spacing = (family.upper[i] - family.lower[i]) / static_cast<double>(family.nodes - 1);
        const double h = std::min(1e-4, spacing);
        auto coord = [&](double s) {
            std::vector<double> q = point;
            q[i] += s;
            return grassmann::chart_coordinates(family.value(q), jet.l).matrix();
        };
        auto diff = [&](double s) { return (coord(s) - coord(-s)) * cplx(0.5 / s); };
        jet.tangents.emplace_back((diff(0.5 * h) * cplx(4.0) - diff(h)) * cplx(1.0 / 3.0));
    }
    return jet;
}

TotalIntersection total_intersection_number(const std::vector<MeshFamily>& charts, const IsotropicSubspace& w,
                                            const Tolerance& tol) {
    TotalIntersection out;
    std::vector<LagrangianFrame> seen;
    for (std::size_t c = 0; c < charts.size(); ++c) {
        const MeshFamily& family = charts[c];
        if (family.dim() + 1 != 2 * (w.codim_in_hminus() + 1))
            throw InputError("family dimension must be 2k - 1 for W of codimension k - 1");
        for (const LocatedCrossing& x : locate_crossings(family, w, tol)) {
            const LagrangianFrame l = family.value(x.point);
            const Tolerance same{1e-6, tol.crossing_eps};
            if (std::any_of(seen.begin(), seen.end(),
                            [&](const LagrangianFrame& s) { return grassmann::same_lagrangian(s, l, same); }))
                continue;
            seen.push_back(l);
            const Tolerance jet_tol{std::max(tol.rank_eps, 100.0 * x.residual), tol.crossing_eps};
            IntersectionResult r = intersection_number_lagrangian(family_jet(family, x.point, w), jet_tol);
            r.epsilon *= family.orientation;
            out.total += r.epsilon;
            out.crossings.push_back({c, x, r});
        }
    }
    return out;
}

}  // namespace lagflow

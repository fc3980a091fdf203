// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "lagflow/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "lagflow/errors.hpp"
#include "lagflow/kernels.hpp"

namespace lagflow {

Matrix::Matrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.assign(rows_ * cols_, cplx{});
    std::size_t i = 0;
    for (const auto& r : rows) {
        if (r.size() != cols_) throw InputError("ragged matrix literal");
        std::size_t j = 0;
        for (const cplx& v : r) (*this)(i, j++) = v;
        ++i;
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const std::vector<cplx>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix r(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t i = 0; i < rows_; ++i) r(j, i) = std::conj((*this)(i, j));
    return r;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw InputError("block out of range");
    Matrix b(nr, nc);
    for (std::size_t j = 0; j < nc; ++j)
        std::copy_n(col(c0 + j) + r0, nr, b.col(j));
    return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw InputError("block out of range");
    for (std::size_t j = 0; j < b.cols(); ++j)
        std::copy_n(b.col(j), b.rows(), col(c0 + j) + r0);
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (const cplx& v : data_) m = std::max(m, std::abs(v));
    return m;
}

double Matrix::frobenius() const {
    return std::sqrt(kernels::nrm2sq(data_.data(), data_.size()));
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const cplx& v) {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    });
}

Matrix& Matrix::operator+=(const Matrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("dimension mismatch in +");
    kernels::axpy(1.0, o.data_.data(), data_.data(), data_.size());
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("dimension mismatch in -");
    kernels::axpy(-1.0, o.data_.data(), data_.data(), data_.size());
    return *this;
}

Matrix& Matrix::operator*=(cplx a) {
    kernels::scal(a, data_.data(), data_.size());
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, cplx s) { return a *= s; }
Matrix operator*(cplx s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw InputError("dimension mismatch in *");
    Matrix c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx s = b(k, j);
            if (s != cplx{}) kernels::axpy(s, a.col(k), c.col(j), a.rows());
        }
    return c;
}

Matrix adjoint_times(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw InputError("dimension mismatch in a*b");
    Matrix c(a.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t i = 0; i < a.cols(); ++i) c(i, j) = kernels::dotc(a.col(i), b.col(j), a.rows());
    return c;
}

Matrix hcat(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw InputError("dimension mismatch in hcat");
    Matrix c(a.rows(), a.cols() + b.cols());
    c.set_block(0, 0, a);
    c.set_block(0, a.cols(), b);
    return c;
}

Matrix vcat(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw InputError("dimension mismatch in vcat");
    Matrix c(a.rows() + b.rows(), a.cols());
    c.set_block(0, 0, a);
    c.set_block(a.rows(), 0, b);
    return c;
}

HermitianMatrix::HermitianMatrix(const Matrix& m) {
    if (m.rows() != m.cols()) throw InputError("Hermitian matrix must be square");
    if (!m.all_finite()) throw InputError("non-finite matrix entry");
    const std::size_t n = m.rows();
    m_ = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        m_(j, j) = m(j, j).real();
        for (std::size_t i = j + 1; i < n; ++i) {
            const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m_(i, j) = v;
            m_(j, i) = std::conj(v);
        }
    }
}

HermitianMatrix HermitianMatrix::checked(const Matrix& m, double rel_tol) {
    if (m.rows() != m.cols()) throw InputError("Hermitian matrix must be square");
    if ((m - m.adjoint()).max_abs() > rel_tol * std::max(1.0, m.max_abs()))
        throw InputError("matrix is not Hermitian");
    return HermitianMatrix(m);
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
    return HermitianMatrix(m_ + o.m_);
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
    return HermitianMatrix(m_ - o.m_);
}

HermitianMatrix HermitianMatrix::operator*(double s) const { return HermitianMatrix(m_ * cplx(s)); }

Tolerance Tolerance::from_env() {
    Tolerance t;
    if (const char* s = std::getenv("LAGFLOW_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(s, &end);
        if (end == s || *end != '\0' || !(v > 0.0) || !std::isfinite(v))
            throw InputError("LAGFLOW_TOL must be a positive number");
        t.rank_eps = v;
    }
    return t;
}

void Tolerance::validate() const {
    if (!(rank_eps > 0.0) || !(crossing_eps > 0.0)) throw InputError("tolerances must be positive");
}

namespace linalg {
namespace {

constexpr int kMaxSweeps = 100;

// Unitary G acting on coordinates (p, q) that diagonalizes the Hermitian
// 2x2 block [[app, apq], [conj(apq), aqq]]: G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
// with apq = r e^{i phi}. t = tan of the rotation angle.
struct Rotation {
    cplx a, b, c, d;  // kernel coefficients for (col_p, col_q) <- (a p + b q, c p + d q)
    double t, r;
};

Rotation jacobi_rotation(double app, double aqq, cplx apq) {
    const double r = std::abs(apq);
    const cplx ph = apq / r;  // e^{i phi}
    const double tau = (aqq - app) / (2.0 * r);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const cplx em = std::conj(ph);
    return {c, -s * em, s, c * em, t, r};
}

}  // namespace

static EigenDecomposition hermitian_eig_impl(const HermitianMatrix& h, bool want_vectors) {
    const std::size_t n = h.dim();
    Matrix a = h.matrix();
    Matrix v = want_vectors ? Matrix::identity(n) : Matrix();
    const double fro = a.frobenius();
    auto off = [&]() {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };
    const double target = 1e-15 * fro;
    int sweep = 0;
    while (off() > target) {
        if (++sweep > kMaxSweeps) throw NumericalError("eig failure");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                if (std::abs(apq) <= 1e-300 || std::abs(apq) < 1e-18 * fro) continue;
                const double app = a(p, p).real(), aqq = a(q, q).real();
                const Rotation g = jacobi_rotation(app, aqq, apq);
                kernels::rot(a.col(p), a.col(q), n, g.a, g.b, g.c, g.d);
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == p || j == q) continue;
                    a(p, j) = std::conj(a(j, p));
                    a(q, j) = std::conj(a(j, q));
                }
                a(p, p) = app - g.t * g.r;
                a(q, q) = aqq + g.t * g.r;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                if (want_vectors) kernels::rot(v.col(p), v.col(q), n, g.a, g.b, g.c, g.d);
            }
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
    EigenDecomposition out;
    out.values.resize(n);
    if (want_vectors) out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        if (want_vectors) std::copy_n(v.col(order[k]), n, out.vectors.col(k));
    }
    return out;
}

EigenDecomposition hermitian_eig(const HermitianMatrix& m) { return hermitian_eig_impl(m, true); }

std::vector<double> hermitian_eigvals(const HermitianMatrix& m) {
    return hermitian_eig_impl(m, false).values;
}

Svd svd(const Matrix& a) {
    const std::size_t r = a.rows(), c = a.cols();
    Matrix w = a;
    Matrix v = Matrix::identity(c);
    if (!a.all_finite()) throw InputError("non-finite matrix entry");
    // Columns below this norm are numerically zero and no longer rotated.
    const double negligible = 1e-300 + 1e-16 * a.frobenius();
    int sweep = 0;
    bool rotated = true;
    while (rotated) {
        if (++sweep > kMaxSweeps) throw NumericalError("svd failure");
        rotated = false;
        for (std::size_t p = 0; p + 1 < c; ++p) {
            for (std::size_t q = p + 1; q < c; ++q) {
                const double alpha = kernels::nrm2sq(w.col(p), r);
                const double beta = kernels::nrm2sq(w.col(q), r);
                const cplx gamma = kernels::dotc(w.col(p), w.col(q), r);
                if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
                if (std::min(alpha, beta) <= negligible * negligible) continue;
                rotated = true;
                const Rotation g = jacobi_rotation(alpha, beta, gamma);
                kernels::rot(w.col(p), w.col(q), r, g.a, g.b, g.c, g.d);
                kernels::rot(v.col(p), v.col(q), c, g.a, g.b, g.c, g.d);
            }
        }
    }
    std::vector<double> s(c);
    for (std::size_t j = 0; j < c; ++j) s[j] = std::sqrt(kernels::nrm2sq(w.col(j), r));
    std::vector<std::size_t> order(c);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return s[x] > s[y]; });
    Svd out;
    out.s.resize(c);
    out.u = Matrix(r, c);
    out.v = Matrix(c, c);
    for (std::size_t k = 0; k < c; ++k) {
        const std::size_t j = order[k];
        out.s[k] = s[j];
        std::copy_n(v.col(j), c, out.v.col(k));
        if (s[j] > 0.0) {
            std::copy_n(w.col(j), r, out.u.col(k));
            kernels::scal(1.0 / s[j], out.u.col(k), r);
        }
    }
    return out;
}

std::vector<double> singular_values(const Matrix& a) { return svd(a).s; }

double sigma_min(const Matrix& a) {
    const std::vector<double> s = singular_values(a);
    return s.empty() ? 0.0 : s.back();
}

namespace {
double rank_threshold(const std::vector<double>& s, const Tolerance& tol) {
    return tol.rank_eps * std::max(1.0, s.empty() ? 0.0 : s.front());
}
}  // namespace

Matrix numeric_kernel(const Matrix& a, const Tolerance& tol) {
    const Svd d = svd(a);
    const double thr = rank_threshold(d.s, tol);
    std::size_t first = 0;
    while (first < d.s.size() && d.s[first] > thr) ++first;
    return d.v.columns(first, d.s.size() - first);
}

Matrix numeric_range(const Matrix& a, const Tolerance& tol) {
    const Svd d = svd(a);
    const double thr = rank_threshold(d.s, tol);
    std::size_t rank = 0;
    while (rank < d.s.size() && d.s[rank] > thr) ++rank;
    return d.u.columns(0, rank);
}

Matrix orthonormalize(const Matrix& a) {
    Matrix q = a;
    const std::size_t r = a.rows();
    for (std::size_t j = 0; j < a.cols(); ++j) {
        const double n0 = std::sqrt(kernels::nrm2sq(q.col(j), r));
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t k = 0; k < j; ++k) {
                const cplx h = kernels::dotc(q.col(k), q.col(j), r);
                kernels::axpy(-h, q.col(k), q.col(j), r);
            }
        const double nj = std::sqrt(kernels::nrm2sq(q.col(j), r));
        if (!(nj > 1e-12 * std::max(n0, 1e-300))) throw InputError("columns are linearly dependent");
        kernels::scal(1.0 / nj, q.col(j), r);
    }
    return q;
}

Matrix orthogonal_complement(const Matrix& frame, const Tolerance& tol) {
    if (frame.cols() == 0) return Matrix::identity(frame.rows());
    return numeric_kernel(frame.adjoint(), tol);
}

Matrix projector(const Matrix& frame) { return frame * frame.adjoint(); }

std::size_t subspace_intersection_dim(const Matrix& f1, const Matrix& f2, const Tolerance& tol) {
    return subspace_intersection(f1, f2, tol).cols();
}

Matrix subspace_intersection(const Matrix& f1, const Matrix& f2, const Tolerance& tol) {
    if (f1.rows() != f2.rows()) throw InputError("ambient dimension mismatch");
    if (f1.cols() == 0 || f2.cols() == 0) return Matrix(f1.rows(), 0);
    const Matrix k = numeric_kernel(hcat(f1, f2 * cplx(-1.0)), tol);
    if (k.cols() == 0) return Matrix(f1.rows(), 0);
    // Average the two representations of each intersection vector.
    Matrix x = f1 * k.block(0, 0, f1.cols(), k.cols()) + f2 * k.block(f1.cols(), 0, f2.cols(), k.cols());
    return numeric_range(x, Tolerance{1e-6, tol.crossing_eps});
}

bool same_subspace(const Matrix& f1, const Matrix& f2, const Tolerance& tol) {
    if (f1.rows() != f2.rows()) throw InputError("ambient dimension mismatch");
    if (f1.cols() != f2.cols()) return false;
    return subspace_intersection_dim(f1, f2, tol) == f1.cols();
}

double subspace_distance(const Matrix& f1, const Matrix& f2) {
    if (f1.rows() != f2.rows() || f1.cols() != f2.cols()) throw InputError("subspace shape mismatch");
    if (f1.cols() == 0) return 0.0;
    // Sine of the largest principal angle, ||(1 - P1) F2||; the cosine
    // route loses half the digits near 0.
    const Svd s = svd(f2 - f1 * adjoint_times(f1, f2));
    return std::min(1.0, s.s.empty() ? 0.0 : s.s[0]);
}

namespace {

struct Lu {
    Matrix lu;
    std::vector<std::size_t> piv;
};

Lu lu_factor(const Matrix& a) {
    if (a.rows() != a.cols()) throw InputError("LU of non-square matrix");
    const std::size_t n = a.rows();
    Lu f{a, std::vector<std::size_t>(n)};
    Matrix& m = f.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(m(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m(i, k)) > best) best = std::abs(m(i, k)), p = i;
        if (best == 0.0) throw NumericalError("singular matrix");
        f.piv[k] = p;
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
        const cplx inv = 1.0 / m(k, k);
        for (std::size_t i = k + 1; i < n; ++i) m(i, k) *= inv;
        for (std::size_t j = k + 1; j < n; ++j) {
            const cplx s = m(k, j);
            if (s != cplx{}) kernels::axpy(-s, m.col(k) + k + 1, m.col(j) + k + 1, n - k - 1);
        }
    }
    return f;
}

}  // namespace

Matrix solve(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw InputError("dimension mismatch in solve");
    const Lu f = lu_factor(a);
    const std::size_t n = a.rows();
    Matrix x = b;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        cplx* y = x.col(c);
        for (std::size_t k = 0; k < n; ++k)
            if (f.piv[k] != k) std::swap(y[k], y[f.piv[k]]);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = k + 1; i < n; ++i) y[i] -= f.lu(i, k) * y[k];
        for (std::size_t k = n; k-- > 0;) {
            y[k] /= f.lu(k, k);
            for (std::size_t i = 0; i < k; ++i) y[i] -= f.lu(i, k) * y[k];
        }
    }
    return x;
}

Matrix inverse(const Matrix& a) { return solve(a, Matrix::identity(a.rows())); }

double real_determinant(std::vector<double> a, std::size_t n) {
    if (a.size() != n * n) throw InputError("determinant size mismatch");
    double det = 1.0;
    // row-major elimination with partial pivoting
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i * n + k]) > std::abs(a[p * n + k])) p = i;
        if (a[p * n + k] == 0.0) return 0.0;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
            det = -det;
        }
        det *= a[k * n + k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = a[i * n + k] / a[k * n + k];
            for (std::size_t j = k; j < n; ++j) a[i * n + j] -= l * a[k * n + j];
        }
    }
    return det;
}

Matrix expi(const HermitianMatrix& g, double t) {
    const EigenDecomposition e = hermitian_eig(g);
    const std::size_t n = g.dim();
    Matrix vd = e.vectors;
    for (std::size_t j = 0; j < n; ++j) kernels::scal(std::polar(1.0, t * e.values[j]), vd.col(j), n);
    return vd * e.vectors.adjoint();
}

UnitaryEigen unitary_eig(const Matrix& u) {
    const std::size_t n = u.rows();
    if (u.cols() != n) throw InputError("unitary matrix must be square");
    const double pi = std::acos(-1.0);
    const Matrix id = Matrix::identity(n);
    // Among n + 1 equally spaced centres one keeps -e^{ia} at angular
    // distance >= pi/(n+1) from every eigenvalue.
    double best_a = 0.0, best_s = -1.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double a = 2.0 * pi * static_cast<double>(k) / static_cast<double>(n + 1) + 0.1;
        const double s = sigma_min(id + u * std::polar(1.0, -a));
        if (s > best_s) best_s = s, best_a = a;
    }
    const Matrix v = u * std::polar(1.0, -best_a);
    const Matrix h = (id - v) * solve((id + v).adjoint(), id).adjoint() * cplx(0.0, 1.0);
    const EigenDecomposition e = hermitian_eig(HermitianMatrix(h));
    UnitaryEigen out;
    std::vector<std::pair<double, std::size_t>> ph;
    for (std::size_t j = 0; j < n; ++j) {
        double p = best_a + 2.0 * std::atan(e.values[j]);
        p = std::remainder(p, 2.0 * pi);
        if (p <= -pi) p += 2.0 * pi;
        ph.emplace_back(p, j);
    }
    std::sort(ph.begin(), ph.end());
    out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.phases.push_back(ph[k].first);
        std::copy_n(e.vectors.col(ph[k].second), n, out.vectors.col(k));
    }
    return out;
}

double unitarity_residual(const Matrix& u) {
    return (adjoint_times(u, u) - Matrix::identity(u.cols())).max_abs();
}

double orthonormality_residual(const Matrix& f) { return unitarity_residual(f); }

}  // namespace linalg
}  // namespace lagflow

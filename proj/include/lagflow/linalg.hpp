// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

// Dense complex linear algebra: matrices, Hermitian eigendecomposition
// (cyclic Jacobi), SVD (one-sided Jacobi), kernels/ranges with relative rank
// thresholds, and subspace comparisons between orthonormal frames.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace lagflow {

using cplx = std::complex<double>;

// Column-major dense complex matrix. Indexing is (row, col).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    // Row-major nested initializer, for literals in code and tests.
    Matrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(const std::vector<cplx>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }
    cplx* col(std::size_t j) { return data_.data() + j * rows_; }
    const cplx* col(std::size_t j) const { return data_.data() + j * rows_; }

    Matrix adjoint() const;
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    Matrix columns(std::size_t c0, std::size_t nc) const { return block(0, c0, rows_, nc); }
    void set_block(std::size_t r0, std::size_t c0, const Matrix& b);

    // Largest entry modulus.
    double max_abs() const;
    double frobenius() const;
    bool all_finite() const;

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(cplx a);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, cplx s);
Matrix operator*(cplx s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);

Matrix hcat(const Matrix& a, const Matrix& b);
Matrix vcat(const Matrix& a, const Matrix& b);
// a* b without forming the adjoint.
Matrix adjoint_times(const Matrix& a, const Matrix& b);

// Square matrix kept exactly Hermitian: the constructor replaces M by
// (M + M*)/2.
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(const Matrix& m);
    // Rejects inputs further than rel_tol * max(1, |M|) from Hermitian.
    static HermitianMatrix checked(const Matrix& m, double rel_tol = 1e-10);
    static HermitianMatrix zero(std::size_t n) { return HermitianMatrix(Matrix(n, n)); }

    std::size_t dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    HermitianMatrix operator+(const HermitianMatrix& o) const;
    HermitianMatrix operator-(const HermitianMatrix& o) const;
    HermitianMatrix operator*(double s) const;

private:
    Matrix m_;
};

struct Tolerance {
    double rank_eps = 1e-8;
    double crossing_eps = 1e-9;

    // Defaults, with rank_eps taken from LAGFLOW_TOL when set.
    static Tolerance from_env();
    void validate() const;
};

namespace linalg {

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    Matrix vectors;              // columns, unitary
};

EigenDecomposition hermitian_eig(const HermitianMatrix& m);
std::vector<double> hermitian_eigvals(const HermitianMatrix& m);

// Thin SVD A = U diag(s) V* of an r x c matrix with s descending and c
// singular values (zero padded when c > r). Columns of U belonging to zero
// singular values are zero.
struct Svd {
    std::vector<double> s;
    Matrix u;
    Matrix v;
};

Svd svd(const Matrix& a);
std::vector<double> singular_values(const Matrix& a);
double sigma_min(const Matrix& a);

// Right singular vectors with sigma <= rank_eps * max(1, sigma_max).
Matrix numeric_kernel(const Matrix& a, const Tolerance& tol);
// Left singular vectors with sigma > rank_eps * max(1, sigma_max).
Matrix numeric_range(const Matrix& a, const Tolerance& tol);

// Modified Gram-Schmidt with one re-orthogonalization pass. Throws
// InputError when the columns are numerically dependent.
Matrix orthonormalize(const Matrix& a);
// Orthonormal frame of the orthogonal complement of span(frame).
Matrix orthogonal_complement(const Matrix& frame, const Tolerance& tol = {});
Matrix projector(const Matrix& frame);

std::size_t subspace_intersection_dim(const Matrix& f1, const Matrix& f2, const Tolerance& tol);
// Orthonormal frame of span(f1) ∩ span(f2).
Matrix subspace_intersection(const Matrix& f1, const Matrix& f2, const Tolerance& tol);
bool same_subspace(const Matrix& f1, const Matrix& f2, const Tolerance& tol);
// Sine of the largest principal angle between equal-dimensional subspaces.
double subspace_distance(const Matrix& f1, const Matrix& f2);

// LU with partial pivoting. Throws NumericalError on an exactly zero pivot.
Matrix solve(const Matrix& a, const Matrix& b);
Matrix inverse(const Matrix& a);
double real_determinant(std::vector<double> a, std::size_t n);

// exp(i t G) for Hermitian G.
Matrix expi(const HermitianMatrix& g, double t);

// Eigenphases of a unitary matrix in (-pi, pi], ascending, with
// eigenvectors. Computed from the Hermitian Cayley transform
// i(1 - e^{-ia}U)(1 + e^{-ia}U)^{-1}, a chosen away from the spectrum.
struct UnitaryEigen {
    std::vector<double> phases;
    Matrix vectors;
};
UnitaryEigen unitary_eig(const Matrix& u);

double unitarity_residual(const Matrix& u);
double orthonormality_residual(const Matrix& f);

}  // namespace linalg
}  // namespace lagflow

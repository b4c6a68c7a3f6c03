#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "esn/rng.hpp"

namespace esn {

/// Dense real matrix with row-major storage. Entries are validated to be
/// finite on construction, and every library operation that returns a
/// Matrix re-establishes that invariant on its result.
class Matrix {
public:
    Matrix() = default;

    /// Zero-filled rows x cols matrix.
    Matrix(std::size_t rows, std::size_t cols);

    /// Takes ownership of a row-major entry buffer; throws ShapeError if
    /// the buffer length is not rows*cols, NumericError on non-finite
    /// entries.
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    /// Brace construction from rows: Matrix{{1, 2}, {3, 4}}.
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return entries_.empty(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    double operator()(std::size_t i, std::size_t j) const {
        return entries_[i * cols_ + j];
    }
    double& operator()(std::size_t i, std::size_t j) {
        return entries_[i * cols_ + j];
    }

    std::span<const double> row(std::size_t i) const {
        return {entries_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) {
        return {entries_.data() + i * cols_, cols_};
    }

    const std::vector<double>& entries() const noexcept { return entries_; }

    Matrix transposed() const;

    /// Returns factor * (*this).
    Matrix scaled(double factor) const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

/// Standard matrix product; a.cols() must equal b.rows().
Matrix mat_mul(const Matrix& a, const Matrix& b);

/// a * b^T without materializing the transpose (rows of both operands
/// stream sequentially).
Matrix mat_mul_nt(const Matrix& a, const Matrix& b);

/// a * a^T, exploiting symmetry of the result.
Matrix gram(const Matrix& a);

/// Matrix-vector product; x.size() must equal a.cols().
std::vector<double> mat_vec(const Matrix& a, std::span<const double> x);

/// All eigenvalues of a square matrix, computed by balancing, Householder
/// reduction to upper Hessenberg form and Francis double-shift QR
/// iteration (complex conjugate pairs come out exactly conjugate).
/// Throws ConvergenceError if deflation stalls within the sweep budget.
std::vector<std::complex<double>> eigenvalues(const Matrix& a, double tol = 1e-10);

/// Largest eigenvalue magnitude max_i |lambda_i|.
double spectral_radius(const Matrix& a, double tol = 1e-10);

/// Matrix 2-norm sqrt(rho(a a^T)), computed by power iteration on the
/// symmetric positive semidefinite matrix a a^T with a Rayleigh-quotient
/// residual stopping rule.
double largest_singular_value(const Matrix& a, double tol = 1e-10);

/// Ridge solution  b s^T (s s^T + gamma^2 I)^{-1}  via Cholesky
/// factorization of the symmetric system (never an explicit inverse).
/// s is n_s x T, b is n_b x T; the result is n_b x n_s. Note that gamma
/// enters squared. Throws SingularityError when gamma = 0 and s s^T is
/// singular.
Matrix solve_ridge(const Matrix& s, const Matrix& b, double gamma);

/// Matrix with i.i.d. entries uniform on [lo, hi), drawn row by row.
Matrix random_uniform(std::size_t rows, std::size_t cols, double lo, double hi, Rng& rng);

}  // namespace esn

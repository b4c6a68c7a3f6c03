#include "esn/matrix.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "esn/errors.hpp"

namespace esn {

namespace {

void ensure_finite(const std::vector<double>& entries, const char* context) {
    for (double v : entries) {
        if (!std::isfinite(v)) {
            throw NumericError(std::string(context) + ": non-finite matrix entry");
        }
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw ShapeError("Matrix: entry buffer length " + std::to_string(entries_.size()) +
                         " does not match " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    ensure_finite(entries_, "Matrix");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    entries_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw ShapeError("Matrix: ragged initializer rows");
        }
        entries_.insert(entries_.end(), r.begin(), r.end());
    }
    ensure_finite(entries_, "Matrix");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

Matrix Matrix::scaled(double factor) const {
    Matrix s(rows_, cols_);
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        s.entries_[k] = factor * entries_[k];
    }
    ensure_finite(s.entries_, "Matrix::scaled");
    return s;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("mat_mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    Matrix c(a.rows(), b.cols());
    const std::size_t n = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            const auto bk = b.row(k);
            for (std::size_t j = 0; j < n; ++j) {
                ci[j] += aik * bk[j];
            }
        }
    }
    ensure_finite(c.entries(), "mat_mul");
    return c;
}

Matrix mat_mul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        throw ShapeError("mat_mul_nt: inner dimensions " + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.cols()));
    }
    Matrix c(a.rows(), b.rows());
    const std::size_t t = a.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto ai = a.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const auto bj = b.row(j);
            double acc = 0.0;
            for (std::size_t k = 0; k < t; ++k) {
                acc += ai[k] * bj[k];
            }
            c(i, j) = acc;
        }
    }
    ensure_finite(c.entries(), "mat_mul_nt");
    return c;
}

Matrix gram(const Matrix& a) {
    Matrix g(a.rows(), a.rows());
    const std::size_t t = a.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto ai = a.row(i);
        for (std::size_t j = i; j < a.rows(); ++j) {
            const auto aj = a.row(j);
            double acc = 0.0;
            for (std::size_t k = 0; k < t; ++k) {
                acc += ai[k] * aj[k];
            }
            g(i, j) = acc;
            g(j, i) = acc;
        }
    }
    ensure_finite(g.entries(), "gram");
    return g;
}

std::vector<double> mat_vec(const Matrix& a, std::span<const double> x) {
    if (x.size() != a.cols()) {
        throw ShapeError("mat_vec: vector length " + std::to_string(x.size()) +
                         " vs matrix cols " + std::to_string(a.cols()));
    }
    std::vector<double> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto ai = a.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            acc += ai[j] * x[j];
        }
        y[i] = acc;
    }
    return y;
}

Matrix solve_ridge(const Matrix& s, const Matrix& b, double gamma) {
    if (s.cols() != b.cols()) {
        throw ShapeError("solve_ridge: s has " + std::to_string(s.cols()) +
                         " columns but b has " + std::to_string(b.cols()));
    }
    if (s.cols() == 0) {
        throw ShapeError("solve_ridge: empty sample dimension");
    }
    if (!(gamma >= 0.0)) {
        throw ParameterError("solve_ridge: gamma must be >= 0");
    }
    const std::size_t n = s.rows();
    Matrix g = gram(s);
    for (std::size_t i = 0; i < n; ++i) {
        g(i, i) += gamma * gamma;
    }
    Matrix c = mat_mul_nt(b, s);  // n_b x n_s

    // In-place Cholesky g = L L^T (lower triangle).
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, g(i, i));
    const double pivot_floor =
        static_cast<double>(n) * std::numeric_limits<double>::epsilon() * max_diag;
    for (std::size_t j = 0; j < n; ++j) {
        double d = g(j, j);
        const auto lj = g.row(j);
        for (std::size_t k = 0; k < j; ++k) d -= lj[k] * lj[k];
        if (!(d > pivot_floor)) {
            throw SingularityError(
                "solve_ridge: s s^T + gamma^2 I is singular at pivot " + std::to_string(j) +
                (gamma == 0.0 ? "; use a positive gamma" : ""));
        }
        const double ljj = std::sqrt(d);
        g(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double acc = g(i, j);
            const auto li = g.row(i);
            for (std::size_t k = 0; k < j; ++k) acc -= li[k] * lj[k];
            g(i, j) = acc / ljj;
        }
    }

    // Row r of the result solves L L^T x = c_r.
    Matrix w(b.rows(), n);
    std::vector<double> y(n);
    for (std::size_t r = 0; r < b.rows(); ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = c(r, i);
            const auto li = g.row(i);
            for (std::size_t k = 0; k < i; ++k) acc -= li[k] * y[k];
            y[i] = acc / g(i, i);
        }
        auto wr = w.row(r);
        for (std::size_t ii = n; ii-- > 0;) {
            double acc = y[ii];
            for (std::size_t k = ii + 1; k < n; ++k) acc -= g(k, ii) * wr[k];
            wr[ii] = acc / g(ii, ii);
        }
    }
    ensure_finite(w.entries(), "solve_ridge");
    return w;
}

Matrix random_uniform(std::size_t rows, std::size_t cols, double lo, double hi, Rng& rng) {
    if (!(lo < hi)) {
        throw ParameterError("random_uniform: need lo < hi");
    }
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            m(i, j) = rng.uniform(lo, hi);
        }
    }
    return m;
}

}  // namespace esn

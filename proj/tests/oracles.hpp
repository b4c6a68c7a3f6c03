#pragma once

// Independent numerical oracles for the test suites, backed by Eigen so
// they share no code path with the library implementations they check.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "esn/matrix.hpp"
#include "esn/rng.hpp"

namespace oracles {

inline Eigen::MatrixXd to_eigen(const esn::Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
        }
    }
    return e;
}

inline esn::Matrix from_eigen(const Eigen::MatrixXd& e) {
    esn::Matrix m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    for (Eigen::Index i = 0; i < e.rows(); ++i) {
        for (Eigen::Index j = 0; j < e.cols(); ++j) {
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
        }
    }
    return m;
}

inline double spectral_radius(const esn::Matrix& m) {
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(m), false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

inline double largest_singular_value(const esn::Matrix& m) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(to_eigen(m)).singularValues()(0);
}

/// The ridge solution by the textbook route: explicit inverse of
/// (S S^T + gamma^2 I).
inline esn::Matrix ridge_explicit_inverse(const esn::Matrix& s, const esn::Matrix& b,
                                          double gamma) {
    const Eigen::MatrixXd se = to_eigen(s);
    const Eigen::MatrixXd be = to_eigen(b);
    const Eigen::MatrixXd g =
        se * se.transpose() +
        gamma * gamma * Eigen::MatrixXd::Identity(se.rows(), se.rows());
    return from_eigen(be * se.transpose() * g.inverse());
}

inline esn::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                 double lo = -0.5, double hi = 0.5) {
    esn::Rng rng(seed);
    return esn::random_uniform(rows, cols, lo, hi, rng);
}

}  // namespace oracles

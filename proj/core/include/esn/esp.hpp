#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "esn/matrix.hpp"

namespace esn {

/// Spectral quantities of an (unscaled) reservoir matrix and the
/// interval of scaling factors they bound: eta is the largest singular
/// value, rho the spectral radius, and U = [1/eta, 1/rho] is the range
/// where scaling satisfies neither the sufficient condition
/// (alpha*eta < 1) nor violates the necessary one (alpha*rho <= 1).
struct SpectralBounds {
    double eta = 0.0;
    double rho = 0.0;
    double u_low = 0.0;   ///< 1 / eta
    double u_high = 0.0;  ///< 1 / rho
};

/// Echo-state-property regime of one scaling factor.
enum class Regime {
    kSufficient,         ///< alpha below 1/eta: contraction guaranteed
    kItuc,               ///< inside U: neither condition decides
    kNecessaryViolated,  ///< alpha above 1/rho: zero input breaks the property
};

std::string to_string(Regime regime);

/// Computes eta, rho and the interval endpoints of a square matrix.
/// Throws DegenerateInputError when the spectrum cannot bound an
/// interval (zero matrix, or rho numerically zero as for nilpotents).
SpectralBounds compute_bounds(const Matrix& w_r_initial, double tol = 1e-10);

/// k evenly spaced scaling factors over [u_low, u_high], both endpoints
/// included exactly. k must be at least 2.
std::vector<double> ituc_grid(const SpectralBounds& bounds, std::size_t k);

/// Classifies alpha against the interval endpoints. Boundary values
/// (alpha == u_low or alpha == u_high) fall inside the interval.
Regime classify_alpha(const SpectralBounds& bounds, double alpha);

}  // namespace esn

#include "esn/esp.hpp"

#include <cmath>

#include "esn/errors.hpp"

namespace esn {

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::kSufficient: return "SUFFICIENT";
        case Regime::kItuc: return "ITUC";
        case Regime::kNecessaryViolated: return "NECESSARY_VIOLATED";
    }
    return "UNKNOWN";
}

SpectralBounds compute_bounds(const Matrix& w_r_initial, double tol) {
    if (!w_r_initial.is_square() || w_r_initial.empty()) {
        throw ShapeError("compute_bounds: need a non-empty square matrix");
    }
    double eta = largest_singular_value(w_r_initial, tol);
    double rho = spectral_radius(w_r_initial, tol);
    if (eta == 0.0 || rho <= 1e-12 * eta) {
        throw DegenerateInputError(
            "compute_bounds: spectral radius is (numerically) zero, interval unbounded");
    }
    if (rho > eta) {
        // eta >= rho always holds in exact arithmetic; the Rayleigh
        // power iteration approaches eta from below, so a symmetric
        // matrix can land a hair under rho. Collapse ties, reject more.
        if (rho - eta <= 1e-8 * eta) {
            eta = rho;
        } else {
            throw NumericError("compute_bounds: computed rho exceeds eta beyond tolerance");
        }
    }
    SpectralBounds b;
    b.eta = eta;
    b.rho = rho;
    b.u_low = 1.0 / eta;
    b.u_high = 1.0 / rho;
    return b;
}

std::vector<double> ituc_grid(const SpectralBounds& bounds, std::size_t k) {
    if (k < 2) throw ParameterError("ituc_grid: need at least 2 grid points");
    std::vector<double> grid(k);
    const double step = (bounds.u_high - bounds.u_low) / static_cast<double>(k - 1);
    for (std::size_t j = 0; j < k; ++j) {
        grid[j] = bounds.u_low + static_cast<double>(j) * step;
    }
    // Endpoints are part of the contract; pin them against rounding.
    grid.front() = bounds.u_low;
    grid.back() = bounds.u_high;
    return grid;
}

Regime classify_alpha(const SpectralBounds& bounds, double alpha) {
    if (!(alpha > 0.0)) throw ParameterError("classify_alpha: alpha must be positive");
    // alpha < u_low is alpha*eta < 1 in exact arithmetic; comparing
    // against the stored endpoints keeps grid endpoints in-interval.
    if (alpha < bounds.u_low) return Regime::kSufficient;
    if (alpha > bounds.u_high) return Regime::kNecessaryViolated;
    return Regime::kItuc;
}

}  // namespace esn

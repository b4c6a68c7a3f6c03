#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "esn/errors.hpp"
#include "esn/matrix.hpp"
#include "esn/rng.hpp"

namespace esn {

namespace {

// Diagonal similarity scaling by powers of two until row and column
// norms agree (EISPACK-style). Exact in floating point, leaves
// eigenvalues untouched, improves accuracy for badly scaled inputs.
void balance_in_place(std::vector<double>& a, const std::size_t n) {
    constexpr double radix = 2.0;
    constexpr double sqrdx = radix * radix;
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double r = 0.0;
            double c = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a[j * n + i]);
                r += std::abs(a[i * n + j]);
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                g = 1.0 / f;
                for (std::size_t j = 0; j < n; ++j) a[i * n + j] *= g;
                for (std::size_t j = 0; j < n; ++j) a[j * n + i] *= f;
            }
        }
    }
}

// Householder similarity reduction to upper Hessenberg form; entries
// below the first subdiagonal are zeroed exactly.
void hessenberg_in_place(std::vector<double>& a, const std::size_t n) {
    if (n < 3) return;
    std::vector<double> v(n), w(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double scale = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) scale += std::abs(a[i * n + k]);
        if (scale == 0.0) continue;
        double norm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = a[i * n + k] / scale;
            norm2 += v[i] * v[i];
        }
        double norm = std::sqrt(norm2);
        if (v[k + 1] < 0.0) norm = -norm;
        v[k + 1] += norm;
        // v^T v = 2 * norm * v[k+1], so beta = 2 / v^T v.
        const double beta = 1.0 / (norm * v[k + 1]);

        // Left: A -= v (beta v^T A).
        std::fill(w.begin(), w.end(), 0.0);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double vi = v[i];
            const double* row = &a[i * n];
            for (std::size_t j = 0; j < n; ++j) w[j] += vi * row[j];
        }
        for (std::size_t j = 0; j < n; ++j) w[j] *= beta;
        for (std::size_t i = k + 1; i < n; ++i) {
            const double vi = v[i];
            double* row = &a[i * n];
            for (std::size_t j = 0; j < n; ++j) row[j] -= vi * w[j];
        }

        // Right: A -= (beta A v) v^T.
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = &a[i * n];
            double acc = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) acc += row[j] * v[j];
            w[i] = beta * acc;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double wi = w[i];
            double* row = &a[i * n];
            for (std::size_t j = k + 1; j < n; ++j) row[j] -= wi * v[j];
        }

        a[(k + 1) * n + k] = -norm * scale;
        for (std::size_t i = k + 2; i < n; ++i) a[i * n + k] = 0.0;
    }
}

// Francis double-shift QR iteration on an upper Hessenberg matrix
// (classical EISPACK hqr scheme). Subdiagonal entries count as
// negligible relative to the local diagonal scale at threshold `tol`.
std::vector<std::complex<double>> hessenberg_qr(std::vector<double>& h, const std::size_t n,
                                                const double tol, const long sweep_budget) {
    std::vector<std::complex<double>> eig(n);

    double anorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = (i > 0 ? i - 1 : 0); j < n; ++j) anorm += std::abs(h[i * n + j]);
    }

    const auto fail = [&](int active_end, double t_shift, const char* why) {
        double best = 0.0;
        for (int i = active_end + 1; i < static_cast<int>(n); ++i) {
            best = std::max(best, std::abs(eig[i]));
        }
        for (int i = 0; i <= active_end; ++i) {
            best = std::max(best, std::abs(h[i * n + i] + t_shift));
        }
        throw ConvergenceError(std::string("eigenvalues: QR iteration did not converge (") +
                                   why + ")",
                               best);
    };

    long sweeps = 0;
    int nn = static_cast<int>(n) - 1;
    double t = 0.0;
    const auto at = [&](int i, int j) -> double& { return h[i * n + j]; };

    while (nn >= 0) {
        int its = 0;
        for (;;) {
            int l;
            for (l = nn; l >= 1; --l) {
                double s = std::abs(at(l - 1, l - 1)) + std::abs(at(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(at(l, l - 1)) <= tol * s) {
                    at(l, l - 1) = 0.0;
                    break;
                }
            }
            double x = at(nn, nn);
            if (l == nn) {
                eig[nn] = {x + t, 0.0};
                --nn;
                break;
            }
            double y = at(nn - 1, nn - 1);
            double w = at(nn, nn - 1) * at(nn - 1, nn);
            if (l == nn - 1) {
                double p = 0.5 * (y - x);
                double q = p * p + w;
                double z = std::sqrt(std::abs(q));
                x += t;
                if (q >= 0.0) {
                    z = p + std::copysign(z, p);
                    eig[nn - 1] = eig[nn] = {x + z, 0.0};
                    if (z != 0.0) eig[nn] = {x - w / z, 0.0};
                } else {
                    eig[nn - 1] = {x + p, z};
                    eig[nn] = {x + p, -z};
                }
                nn -= 2;
                break;
            }

            if (its == 30) fail(nn, t, "30 sweeps on one eigenvalue");
            if (++sweeps > sweep_budget) fail(nn, t, "global sweep budget");
            if (its == 10 || its == 20) {
                // Exceptional shift to break symmetry-induced stalls.
                t += x;
                for (int i = 0; i <= nn; ++i) at(i, i) -= x;
                const double s = std::abs(at(nn, nn - 1)) + std::abs(at(nn - 1, nn - 2));
                y = x = 0.75 * s;
                w = -0.4375 * s * s;
            }
            ++its;

            // Look for two consecutive small subdiagonals to start the
            // implicit double shift at.
            int m;
            double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
            for (m = nn - 2; m >= l; --m) {
                z = at(m, m);
                const double rr = x - z;
                const double ss = y - z;
                p = (rr * ss - w) / at(m + 1, m) + at(m, m + 1);
                q = at(m + 1, m + 1) - z - rr - ss;
                r = at(m + 2, m + 1);
                const double s = std::abs(p) + std::abs(q) + std::abs(r);
                p /= s;
                q /= s;
                r /= s;
                if (m == l) break;
                const double u = std::abs(at(m, m - 1)) * (std::abs(q) + std::abs(r));
                const double v =
                    std::abs(p) * (std::abs(at(m - 1, m - 1)) + std::abs(z) +
                                   std::abs(at(m + 1, m + 1)));
                if (u <= tol * v) break;
            }
            for (int i = m + 2; i <= nn; ++i) {
                at(i, i - 2) = 0.0;
                if (i != m + 2) at(i, i - 3) = 0.0;
            }

            // Bulge chase across rows l..nn.
            for (int k = m; k <= nn - 1; ++k) {
                if (k != m) {
                    p = at(k, k - 1);
                    q = at(k + 1, k - 1);
                    r = (k != nn - 1) ? at(k + 2, k - 1) : 0.0;
                    x = std::abs(p) + std::abs(q) + std::abs(r);
                    if (x != 0.0) {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                const double s = std::copysign(std::sqrt(p * p + q * q + r * r), p);
                if (s == 0.0) continue;
                if (k == m) {
                    if (l != m) at(k, k - 1) = -at(k, k - 1);
                } else {
                    at(k, k - 1) = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                z = r / s;
                q /= p;
                r /= p;
                for (int j = k; j <= nn; ++j) {  // row modification
                    double pp = at(k, j) + q * at(k + 1, j);
                    if (k != nn - 1) {
                        pp += r * at(k + 2, j);
                        at(k + 2, j) -= pp * z;
                    }
                    at(k + 1, j) -= pp * y;
                    at(k, j) -= pp * x;
                }
                const int mmin = nn < k + 3 ? nn : k + 3;
                for (int i = l; i <= mmin; ++i) {  // column modification
                    double pp = x * at(i, k) + y * at(i, k + 1);
                    if (k != nn - 1) {
                        pp += z * at(i, k + 2);
                        at(i, k + 2) -= pp * r;
                    }
                    at(i, k + 1) -= pp * q;
                    at(i, k) -= pp;
                }
            }
        }
    }
    return eig;
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const Matrix& a, double tol) {
    if (!a.is_square() || a.empty()) {
        throw ShapeError("eigenvalues: need a non-empty square matrix, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
    if (!(tol > 0.0)) {
        throw ParameterError("eigenvalues: tol must be positive");
    }
    const std::size_t n = a.rows();
    std::vector<double> h = a.entries();
    balance_in_place(h, n);
    hessenberg_in_place(h, n);
    const long sweep_budget = 100 * static_cast<long>(n);
    return hessenberg_qr(h, n, tol, sweep_budget);
}

double spectral_radius(const Matrix& a, double tol) {
    double radius = 0.0;
    for (const auto& lambda : eigenvalues(a, tol)) {
        radius = std::max(radius, std::abs(lambda));
    }
    return radius;
}

double largest_singular_value(const Matrix& a, double tol) {
    if (a.empty()) {
        throw ShapeError("largest_singular_value: empty matrix");
    }
    if (!(tol > 0.0)) {
        throw ParameterError("largest_singular_value: tol must be positive");
    }
    const Matrix b = gram(a);  // symmetric PSD, rows x rows
    const std::size_t m = b.rows();

    // Fixed-seed start vector: deterministic output, and a generic
    // direction (never orthogonal to the dominant eigenspace in practice).
    Rng rng(0x5EEDF00D5EEDF00Dull);
    std::vector<double> v(m);
    double norm2 = 0.0;
    for (auto& vi : v) {
        vi = rng.uniform(-1.0, 1.0);
        norm2 += vi * vi;
    }
    const double inv_norm = 1.0 / std::sqrt(norm2);
    for (auto& vi : v) vi *= inv_norm;

    constexpr int budget = 10000;
    double lambda = 0.0;
    for (int it = 0; it < budget; ++it) {
        const std::vector<double> w = mat_vec(b, v);
        lambda = 0.0;
        for (std::size_t i = 0; i < m; ++i) lambda += v[i] * w[i];
        // ||b v - lambda v|| <= tol * lambda bounds the eigenvalue error
        // by tol * lambda for a symmetric matrix.
        double resid2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d = w[i] - lambda * v[i];
            resid2 += d * d;
        }
        if (std::sqrt(resid2) <= tol * std::max(lambda, 1e-300)) {
            return std::sqrt(std::max(lambda, 0.0));
        }
        double wnorm2 = 0.0;
        for (double wi : w) wnorm2 += wi * wi;
        if (wnorm2 == 0.0) {
            return 0.0;  // v landed in the null space: a a^T is (numerically) zero
        }
        const double inv = 1.0 / std::sqrt(wnorm2);
        for (std::size_t i = 0; i < m; ++i) v[i] = w[i] * inv;
    }
    throw ConvergenceError("largest_singular_value: power iteration exhausted its budget",
                           std::sqrt(std::max(lambda, 0.0)));
}

}  // namespace esn

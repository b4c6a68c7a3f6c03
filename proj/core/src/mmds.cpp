#include "esn/mmds.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "esn/errors.hpp"

namespace esn {

double mmds(const TimeSeries& inputs, const StateTrajectory& states, const MmdsWindow& window) {
    if (window.length == 0) {
        throw ParameterError("mmds: window length must be positive");
    }
    if (window.start < states.t_offset) {
        throw ParameterError("mmds: window starts inside the washout");
    }
    const std::size_t end = window.start + window.length;
    if (end > states.states.cols() || end > inputs.size()) {
        throw ParameterError("mmds: window [" + std::to_string(window.start) + ", " +
                             std::to_string(end) + ") exceeds the aligned sequences");
    }

    const std::size_t n_s = states.states.rows();
    const std::size_t len = window.length;

    // Repack the window's states time-major so pair distances stream.
    std::vector<double> s(len * n_s);
    for (std::size_t t = 0; t < len; ++t) {
        for (std::size_t i = 0; i < n_s; ++i) {
            s[t * n_s + i] = states.states(i, window.start + t);
        }
    }

    const std::size_t dim = inputs.dim;
    double sum = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        const auto ai = inputs.sample(window.start + i);
        const double* si = &s[i * n_s];
        for (std::size_t j = i + 1; j < len; ++j) {
            const auto aj = inputs.sample(window.start + j);
            double l2 = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double e = ai[d] - aj[d];
                l2 += e * e;
            }
            const double* sj = &s[j * n_s];
            double d2 = 0.0;
            for (std::size_t k = 0; k < n_s; ++k) {
                const double e = si[k] - sj[k];
                d2 += e * e;
            }
            if (d2 == 0.0) {
                throw DegeneratePairError("mmds: reservoir states at t=" +
                                              std::to_string(window.start + i) + " and t=" +
                                              std::to_string(window.start + j) + " coincide",
                                          window.start + i, window.start + j);
            }
            const double l = std::sqrt(l2);
            const double d = std::sqrt(d2);
            sum += (l - d) * (l - d) / d;
        }
    }
    return sum / static_cast<double>(len);
}

}  // namespace esn

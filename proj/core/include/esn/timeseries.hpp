#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace esn {

/// Ordered multivariate real samples. Storage is sample-major: sample t
/// occupies values[t*dim .. t*dim+dim). dt is the integration step of the
/// generating dynamics; map-based series use dt = 1.
struct TimeSeries {
    std::size_t dim = 1;
    double dt = 1.0;
    std::vector<double> values;

    std::size_t size() const noexcept { return dim == 0 ? 0 : values.size() / dim; }

    std::span<const double> sample(std::size_t t) const {
        return {values.data() + t * dim, dim};
    }

    /// Convenience accessor for scalar (dim = 1) series.
    double scalar(std::size_t t) const { return values[t * dim]; }

    /// Contiguous sub-range [first, first+count).
    TimeSeries slice(std::size_t first, std::size_t count) const;
};

/// Train/test partition sizes; washout is carried along for the
/// consumer's harvesting stage.
struct SplitSpec {
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::size_t washout = 0;
};

/// Mackey-Glass delay differential equation
///   du/dt = 0.2 u(t-tau) / (1 + u(t-tau)^10) - 0.1 u(t),
/// integrated with classical RK4 at step dt; delayed values come from a
/// circular history buffer, linearly interpolated at half steps. The
/// history is pre-filled with history_init and a burn-in of 10*tau/dt
/// steps is discarded. tau/dt must be an integer. The seed does not
/// enter the (deterministic) dynamics; it is carried into file metadata.
TimeSeries gen_mackey_glass(std::size_t n, double tau = 17.0, double dt = 0.1,
                            double history_init = 1.2, std::uint64_t seed = 0);

/// Two superimposed sines plus gaussian noise:
///   a(t) = sin(0.2 t) + sin(0.311 t) + z,  t = 1, 2, ...
/// with z ~ N(0, noise_variance) drawn by Box-Muller from the seeded
/// generator.
TimeSeries gen_mso(std::size_t n, double noise_variance = 0.01, std::uint64_t seed = 0);

struct LorenzParams {
    double r = 28.0;
    double b = 8.0 / 3.0;
    double sigma = 10.0;
};

/// Lorenz system integrated with RK4 from (1,1,1); burn_in leading steps
/// are discarded. Three-dimensional output.
TimeSeries gen_lorenz(std::size_t n, double dt = 0.01, LorenzParams params = {},
                      std::size_t burn_in = 1000);

struct RosslerParams {
    double r = 0.15;
    double b = 0.20;
    double c = 10.0;
};

/// Rossler system integrated with RK4 from (0,1,0); burn_in leading
/// steps are discarded. Three-dimensional output.
TimeSeries gen_rossler(std::size_t n, double dt = 0.05, RosslerParams params = {},
                       std::size_t burn_in = 1000);

/// Henon map x(t+1) = 1 - r x(t)^2 + y(t), y(t+1) = b x(t); returns the
/// x component (it carries the full dynamics via the two-step
/// recurrence). Throws DivergenceError with the step index if |x|
/// exceeds 1e6.
TimeSeries gen_henon(std::size_t n, double r = 1.4, double b = 0.3, double x0 = 1.0,
                     double y0 = 1.0);

/// Time series plus the per-dimension (min, max) pairs that map it back.
struct Normalized {
    TimeSeries series;
    std::vector<std::pair<double, double>> ranges;
};

/// Per-dimension affine map onto [0, 1] (min -> 0, max -> 1 exactly).
/// Throws DegenerateInputError for a constant dimension.
Normalized normalize_01(const TimeSeries& ts);

/// Contiguous prefix/suffix split preserving temporal order.
std::pair<TimeSeries, TimeSeries> split(const TimeSeries& ts, const SplitSpec& spec);

struct SeriesMeta {
    std::string benchmark;
    double dt = 1.0;
    std::uint64_t seed = 0;
};

/// CSV export: one `# benchmark=<name> dt=<dt> seed=<seed>` metadata
/// line, then one row per time step with one column per dimension.
/// Written atomically (temp file + rename).
void write_series_csv(const std::string& path, const TimeSeries& ts, const SeriesMeta& meta);

std::pair<TimeSeries, SeriesMeta> read_series_csv(const std::string& path);

}  // namespace esn

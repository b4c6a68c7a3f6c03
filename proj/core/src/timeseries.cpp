#include "esn/timeseries.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "esn/errors.hpp"
#include "esn/rng.hpp"
#include "io_util.hpp"

namespace esn {

namespace {

void require_positive_count(std::size_t n) {
    if (n == 0) throw ParameterError("generator: sample count must be positive");
}

using Vec3 = std::array<double, 3>;

Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

// Classical RK4 step for a 3-d autonomous field.
template <typename Field>
Vec3 rk4_step(const Field& f, const Vec3& u, double dt) {
    const Vec3 k1 = f(u);
    const Vec3 k2 = f(u + (0.5 * dt) * k1);
    const Vec3 k3 = f(u + (0.5 * dt) * k2);
    const Vec3 k4 = f(u + dt * k3);
    return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <typename Field>
TimeSeries integrate3(const Field& f, Vec3 state, std::size_t n, double dt, std::size_t burn_in) {
    require_positive_count(n);
    if (!(dt > 0.0)) throw ParameterError("generator: dt must be positive");
    for (std::size_t i = 0; i < burn_in; ++i) state = rk4_step(f, state, dt);
    TimeSeries ts;
    ts.dim = 3;
    ts.dt = dt;
    ts.values.reserve(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
        state = rk4_step(f, state, dt);
        ts.values.insert(ts.values.end(), state.begin(), state.end());
    }
    return ts;
}

}  // namespace

TimeSeries TimeSeries::slice(std::size_t first, std::size_t count) const {
    if (first + count > size()) {
        throw ParameterError("TimeSeries::slice: range exceeds series length");
    }
    TimeSeries out;
    out.dim = dim;
    out.dt = dt;
    out.values.assign(values.begin() + static_cast<std::ptrdiff_t>(first * dim),
                      values.begin() + static_cast<std::ptrdiff_t>((first + count) * dim));
    return out;
}

TimeSeries gen_mackey_glass(std::size_t n, double tau, double dt, double history_init,
                            std::uint64_t /*seed*/) {
    require_positive_count(n);
    if (!(tau > 0.0)) throw ParameterError("gen_mackey_glass: tau must be positive");
    if (!(dt > 0.0)) throw ParameterError("gen_mackey_glass: dt must be positive");
    const double steps = tau / dt;
    const std::size_t delay = static_cast<std::size_t>(std::llround(steps));
    if (delay == 0 || std::abs(static_cast<double>(delay) - steps) > 1e-9 * steps) {
        throw ParameterError("gen_mackey_glass: tau/dt must be a positive integer step count");
    }

    const auto deriv = [](double u, double u_delayed) {
        const double d10 = std::pow(u_delayed, 10);
        return 0.2 * u_delayed / (1.0 + d10) - 0.1 * u;
    };

    // ring[pos] holds u(t - tau); the window covers u(t-tau) .. u(t).
    std::vector<double> ring(delay + 1, history_init);
    std::size_t pos = 0;
    double u = history_init;

    const auto step = [&]() {
        const double d0 = ring[pos];                          // u(t - tau)
        const double d1 = ring[(pos + 1) % ring.size()];      // u(t - tau + dt)
        const double dh = 0.5 * (d0 + d1);                    // half-step, linear interpolation
        const double k1 = deriv(u, d0);
        const double k2 = deriv(u + 0.5 * dt * k1, dh);
        const double k3 = deriv(u + 0.5 * dt * k2, dh);
        const double k4 = deriv(u + dt * k3, d1);
        u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ring[pos] = u;
        pos = (pos + 1) % ring.size();
    };

    const std::size_t burn_in = 10 * delay;
    for (std::size_t i = 0; i < burn_in; ++i) step();

    TimeSeries ts;
    ts.dim = 1;
    ts.dt = dt;
    ts.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        step();
        ts.values.push_back(u);
    }
    return ts;
}

TimeSeries gen_mso(std::size_t n, double noise_variance, std::uint64_t seed) {
    require_positive_count(n);
    if (!(noise_variance >= 0.0)) {
        throw ParameterError("gen_mso: noise variance must be non-negative");
    }
    Rng rng(seed);
    const double stddev = std::sqrt(noise_variance);
    TimeSeries ts;
    ts.dim = 1;
    ts.dt = 1.0;
    ts.values.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = static_cast<double>(i);
        ts.values.push_back(std::sin(0.2 * t) + std::sin(0.311 * t) + rng.gaussian(0.0, stddev));
    }
    return ts;
}

TimeSeries gen_lorenz(std::size_t n, double dt, LorenzParams p, std::size_t burn_in) {
    const auto field = [p](const Vec3& u) -> Vec3 {
        return {p.sigma * (u[1] - u[0]), p.r * u[0] - u[1] - u[0] * u[2],
                u[0] * u[1] - p.b * u[2]};
    };
    return integrate3(field, {1.0, 1.0, 1.0}, n, dt, burn_in);
}

TimeSeries gen_rossler(std::size_t n, double dt, RosslerParams p, std::size_t burn_in) {
    const auto field = [p](const Vec3& u) -> Vec3 {
        return {-u[2] - u[1], u[0] + p.r * u[1], p.b + u[2] * (u[0] - p.c)};
    };
    return integrate3(field, {0.0, 1.0, 0.0}, n, dt, burn_in);
}

TimeSeries gen_henon(std::size_t n, double r, double b, double x0, double y0) {
    require_positive_count(n);
    double x = x0;
    double y = y0;
    TimeSeries ts;
    ts.dim = 1;
    ts.dt = 1.0;
    ts.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double xn = 1.0 - r * x * x + y;
        y = b * x;
        x = xn;
        if (std::abs(x) > 1e6) {
            throw DivergenceError("gen_henon: |x| exceeded 1e6 at step " + std::to_string(i), i);
        }
        ts.values.push_back(x);
    }
    return ts;
}

Normalized normalize_01(const TimeSeries& ts) {
    if (ts.size() == 0) throw ParameterError("normalize_01: empty series");
    Normalized out;
    out.series.dim = ts.dim;
    out.series.dt = ts.dt;
    out.series.values.resize(ts.values.size());
    out.ranges.resize(ts.dim);
    for (std::size_t d = 0; d < ts.dim; ++d) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < ts.size(); ++t) {
            const double v = ts.values[t * ts.dim + d];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (!(hi > lo)) {
            throw DegenerateInputError("normalize_01: dimension " + std::to_string(d) +
                                       " is constant");
        }
        const double span = hi - lo;
        for (std::size_t t = 0; t < ts.size(); ++t) {
            out.series.values[t * ts.dim + d] = (ts.values[t * ts.dim + d] - lo) / span;
        }
        out.ranges[d] = {lo, hi};
    }
    return out;
}

std::pair<TimeSeries, TimeSeries> split(const TimeSeries& ts, const SplitSpec& spec) {
    if (spec.n_train == 0 || spec.n_test == 0) {
        throw ParameterError("split: n_train and n_test must be positive");
    }
    if (spec.n_train <= spec.washout) {
        throw ParameterError("split: n_train must exceed washout");
    }
    if (spec.n_train + spec.n_test > ts.size()) {
        throw ParameterError("split: series has " + std::to_string(ts.size()) +
                             " samples, need " + std::to_string(spec.n_train + spec.n_test));
    }
    return {ts.slice(0, spec.n_train), ts.slice(spec.n_train, spec.n_test)};
}

void write_series_csv(const std::string& path, const TimeSeries& ts, const SeriesMeta& meta) {
    detail::atomic_write(path, [&](std::ostream& out) {
        out << "# benchmark=" << meta.benchmark << " dt=" << detail::format_double(meta.dt)
            << " seed=" << meta.seed << "\n";
        for (std::size_t t = 0; t < ts.size(); ++t) {
            const auto s = ts.sample(t);
            for (std::size_t d = 0; d < s.size(); ++d) {
                if (d) out << ',';
                out << detail::format_double(s[d]);
            }
            out << '\n';
        }
    });
}

std::pair<TimeSeries, SeriesMeta> read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.empty() || line[0] != '#') {
        throw ParameterError(path + ": missing '# benchmark=... dt=... seed=...' header");
    }
    SeriesMeta meta;
    {
        std::istringstream hdr(line.substr(1));
        std::string token;
        while (hdr >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = token.substr(0, eq);
            const std::string value = token.substr(eq + 1);
            if (key == "benchmark") {
                meta.benchmark = value;
            } else if (key == "dt") {
                meta.dt = std::strtod(value.c_str(), nullptr);
            } else if (key == "seed") {
                meta.seed = std::strtoull(value.c_str(), nullptr, 10);
            }
        }
    }
    TimeSeries ts;
    ts.dt = meta.dt;
    std::size_t row = 1;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        std::size_t cols = 0;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t end = line.find(',', start);
            if (end == std::string::npos) end = line.size();
            const std::string cell = line.substr(start, end - start);
            char* parse_end = nullptr;
            const double v = std::strtod(cell.c_str(), &parse_end);
            if (parse_end == cell.c_str()) {
                throw ParameterError(path + ": row " + std::to_string(row) +
                                     ": cannot parse '" + cell + "'");
            }
            ts.values.push_back(v);
            ++cols;
            start = end + 1;
            if (end == line.size()) break;
        }
        if (dim == 0) {
            dim = cols;
        } else if (cols != dim) {
            throw ParameterError(path + ": row " + std::to_string(row) + " has " +
                                 std::to_string(cols) + " columns, expected " +
                                 std::to_string(dim));
        }
    }
    if (dim == 0) throw ParameterError(path + ": no data rows");
    ts.dim = dim;
    return {std::move(ts), meta};
}

}  // namespace esn

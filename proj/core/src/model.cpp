#include "esn/model.hpp"

#include <cmath>
#include <string>

#include "esn/errors.hpp"
#include "esn/rng.hpp"

namespace esn {

std::vector<std::string> ReservoirConfig::validate() const {
    if (n_s == 0 || n_a == 0 || n_b == 0) {
        throw ParameterError("ReservoirConfig: n_s, n_a, n_b must be positive");
    }
    if (!(init_low < init_high)) {
        throw ParameterError("ReservoirConfig: need init_low < init_high");
    }
    if (!(alpha > 0.0)) {
        throw ParameterError("ReservoirConfig: alpha must be positive");
    }
    if (!(gamma >= 0.0)) {
        throw ParameterError("ReservoirConfig: gamma must be non-negative");
    }
    std::vector<std::string> warnings;
    if (n_s < n_a) {
        warnings.push_back("reservoir size " + std::to_string(n_s) +
                           " is smaller than the input dimension " + std::to_string(n_a) +
                           "; the projection does not expand the input space");
    }
    return warnings;
}

EsnModel EsnModel::init(const ReservoirConfig& config) {
    config.validate();
    EsnModel m;
    m.config_ = config;
    Rng rng(config.seed);
    m.w_r_initial_ = random_uniform(config.n_s, config.n_s, config.init_low, config.init_high, rng);
    m.w_in_ = random_uniform(config.n_s, config.n_a + 1, config.init_low, config.init_high, rng);
    m.w_r_ = m.w_r_initial_.scaled(config.alpha);
    return m;
}

EsnModel EsnModel::from_parts(const ReservoirConfig& config, Matrix w_in, Matrix w_r_initial,
                              std::optional<Matrix> w_out) {
    config.validate();
    if (w_r_initial.rows() != config.n_s || w_r_initial.cols() != config.n_s) {
        throw ShapeError("EsnModel: w_r_initial must be n_s x n_s");
    }
    if (w_in.rows() != config.n_s || w_in.cols() != config.n_a + 1) {
        throw ShapeError("EsnModel: w_in must be n_s x (n_a+1)");
    }
    if (w_out && (w_out->rows() != config.n_b || w_out->cols() != config.n_s)) {
        throw ShapeError("EsnModel: w_out must be n_b x n_s");
    }
    EsnModel m;
    m.config_ = config;
    m.w_in_ = std::move(w_in);
    m.w_r_initial_ = std::move(w_r_initial);
    m.w_r_ = m.w_r_initial_.scaled(config.alpha);
    m.w_out_ = std::move(w_out);
    return m;
}

const Matrix& EsnModel::w_out() const {
    if (!w_out_) throw NotTrainedError("model has no trained readout");
    return *w_out_;
}

void EsnModel::set_w_out(Matrix w_out) {
    if (w_out.rows() != config_.n_b || w_out.cols() != config_.n_s) {
        throw ShapeError("set_w_out: expected " + std::to_string(config_.n_b) + "x" +
                         std::to_string(config_.n_s));
    }
    w_out_ = std::move(w_out);
}

void EsnModel::rescale(double alpha) {
    if (!(alpha > 0.0)) throw ParameterError("rescale: alpha must be positive");
    config_.alpha = alpha;
    w_r_ = w_r_initial_.scaled(alpha);
    w_out_.reset();
}

std::vector<double> EsnModel::update_state(std::span<const double> s,
                                           std::span<const double> a) const {
    const std::size_t n = config_.n_s;
    if (s.size() != n) {
        throw ShapeError("update_state: state length " + std::to_string(s.size()) +
                         ", expected " + std::to_string(n));
    }
    if (a.size() != config_.n_a) {
        throw ShapeError("update_state: input length " + std::to_string(a.size()) +
                         ", expected " + std::to_string(config_.n_a));
    }
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto win = w_in_.row(i);
        double acc = win[config_.n_a];  // bias column multiplies the constant 1
        for (std::size_t j = 0; j < config_.n_a; ++j) acc += win[j] * a[j];
        const auto wr = w_r_.row(i);
        for (std::size_t j = 0; j < n; ++j) acc += wr[j] * s[j];
        next[i] = std::tanh(acc);
    }
    return next;
}

StateTrajectory EsnModel::harvest(const TimeSeries& inputs, std::span<const double> s0) const {
    if (inputs.dim != config_.n_a) {
        throw ShapeError("harvest: input dimension " + std::to_string(inputs.dim) +
                         ", expected " + std::to_string(config_.n_a));
    }
    const std::size_t t_total = inputs.size();
    if (t_total <= config_.washout) {
        throw DegenerateInputError("harvest: " + std::to_string(t_total) +
                                   " inputs leave nothing after washout " +
                                   std::to_string(config_.washout));
    }
    std::vector<double> state(config_.n_s, 0.0);
    if (!s0.empty()) {
        if (s0.size() != config_.n_s) {
            throw ShapeError("harvest: s0 length " + std::to_string(s0.size()));
        }
        state.assign(s0.begin(), s0.end());
    }
    StateTrajectory traj;
    traj.states = Matrix(config_.n_s, t_total);
    traj.t_offset = config_.washout;
    for (std::size_t t = 0; t < t_total; ++t) {
        state = update_state(state, inputs.sample(t));
        for (std::size_t i = 0; i < config_.n_s; ++i) {
            traj.states(i, t) = state[i];
        }
    }
    return traj;
}

void EsnModel::train(const TimeSeries& inputs, const TimeSeries& targets) {
    if (inputs.size() != targets.size()) {
        throw ShapeError("train: inputs and targets must have equal length");
    }
    if (targets.dim != config_.n_b) {
        throw ShapeError("train: target dimension " + std::to_string(targets.dim) +
                         ", expected " + std::to_string(config_.n_b));
    }
    const StateTrajectory traj = harvest(inputs);
    const std::size_t t_kept = traj.post_washout_count();
    Matrix s(config_.n_s, t_kept);
    for (std::size_t i = 0; i < config_.n_s; ++i) {
        for (std::size_t t = 0; t < t_kept; ++t) {
            s(i, t) = traj.states(i, traj.t_offset + t);
        }
    }
    Matrix b(config_.n_b, t_kept);
    for (std::size_t t = 0; t < t_kept; ++t) {
        const auto target = targets.sample(traj.t_offset + t);
        for (std::size_t d = 0; d < config_.n_b; ++d) {
            b(d, t) = target[d];
        }
    }
    w_out_ = solve_ridge(s, b, config_.gamma);
}

TimeSeries EsnModel::predict_teacher_forced(const TimeSeries& inputs) const {
    const Matrix& readout = w_out();
    const StateTrajectory traj = harvest(inputs);
    TimeSeries out;
    out.dim = config_.n_b;
    out.dt = inputs.dt;
    const std::size_t t_kept = traj.post_washout_count();
    out.values.resize(t_kept * config_.n_b);
    std::vector<double> state(config_.n_s);
    for (std::size_t t = 0; t < t_kept; ++t) {
        for (std::size_t i = 0; i < config_.n_s; ++i) {
            state[i] = traj.states(i, traj.t_offset + t);
        }
        for (std::size_t d = 0; d < config_.n_b; ++d) {
            const auto w = readout.row(d);
            double acc = 0.0;
            for (std::size_t i = 0; i < config_.n_s; ++i) acc += w[i] * state[i];
            out.values[t * config_.n_b + d] = acc;
        }
    }
    return out;
}

TimeSeries EsnModel::predict_free_run(const TimeSeries& warmup, std::size_t horizon) const {
    const Matrix& readout = w_out();
    if (config_.n_a != config_.n_b) {
        throw ShapeError("predict_free_run: output cannot feed back, n_a != n_b");
    }
    if (warmup.dim != config_.n_a) {
        throw ShapeError("predict_free_run: warmup dimension mismatch");
    }
    if (warmup.size() == 0) {
        throw ParameterError("predict_free_run: warmup must contain at least one sample");
    }
    std::vector<double> state(config_.n_s, 0.0);
    for (std::size_t t = 0; t < warmup.size(); ++t) {
        state = update_state(state, warmup.sample(t));
    }
    TimeSeries out;
    out.dim = config_.n_b;
    out.dt = warmup.dt;
    out.values.reserve(horizon * config_.n_b);
    std::vector<double> y(config_.n_b);
    for (std::size_t h = 0; h < horizon; ++h) {
        for (std::size_t d = 0; d < config_.n_b; ++d) {
            const auto w = readout.row(d);
            double acc = 0.0;
            for (std::size_t i = 0; i < config_.n_s; ++i) acc += w[i] * state[i];
            y[d] = acc;
        }
        out.values.insert(out.values.end(), y.begin(), y.end());
        if (h + 1 < horizon) {
            state = update_state(state, y);
        }
    }
    return out;
}

double nrmse(const TimeSeries& y, const TimeSeries& b) {
    if (y.size() != b.size() || y.dim != b.dim) {
        throw ShapeError("nrmse: series shapes differ");
    }
    const std::size_t t_total = b.size();
    if (t_total == 0) throw ParameterError("nrmse: empty series");
    const std::size_t dim = b.dim;
    std::vector<double> mean(dim, 0.0);
    for (std::size_t t = 0; t < t_total; ++t) {
        const auto bt = b.sample(t);
        for (std::size_t d = 0; d < dim; ++d) mean[d] += bt[d];
    }
    for (auto& m : mean) m /= static_cast<double>(t_total);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t t = 0; t < t_total; ++t) {
        const auto bt = b.sample(t);
        const auto yt = y.sample(t);
        for (std::size_t d = 0; d < dim; ++d) {
            const double e = bt[d] - yt[d];
            const double c = bt[d] - mean[d];
            num += e * e;
            den += c * c;
        }
    }
    if (den == 0.0) {
        throw DegenerateInputError("nrmse: target is constant, normalization undefined");
    }
    return std::sqrt(num / den);
}

}  // namespace esn

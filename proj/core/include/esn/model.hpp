#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "esn/matrix.hpp"
#include "esn/timeseries.hpp"

namespace esn {

/// Reservoir construction and training parameters.
struct ReservoirConfig {
    std::size_t n_s = 100;        ///< reservoir neuron count
    std::size_t n_a = 1;          ///< input dimension
    std::size_t n_b = 1;          ///< output dimension
    double init_low = -0.5;      ///< weight init range, lower end
    double init_high = 0.5;      ///< weight init range, upper end
    double alpha = 1.0;          ///< reservoir scaling factor
    double gamma = 1e-3;         ///< ridge regularizer (squared inside the solve)
    std::size_t washout = 100;    ///< leading states dropped before training/eval
    std::uint64_t seed = 0;

    /// Throws ParameterError on hard violations; returns human-readable
    /// warnings for suspicious-but-legal settings (e.g. n_s < n_a).
    std::vector<std::string> validate() const;
};

/// All reservoir states harvested from one input sequence: column t of
/// `states` is s(t+1), the state after consuming input t. Every entry
/// lies strictly inside (-1, 1).
struct StateTrajectory {
    Matrix states;           ///< n_s x T
    std::size_t t_offset = 0;  ///< first post-washout column

    std::size_t post_washout_count() const { return states.cols() - t_offset; }
};

/// The canonical echo state network: fixed random input weights w_in
/// (n_s x (n_a+1), last column is the bias), fixed scaled reservoir
/// w_r = alpha * w_r_initial, and a ridge-trained linear readout w_out.
class EsnModel {
public:
    /// Draws w_r_initial then w_in, i.i.d. uniform on [init_low,
    /// init_high), from an Rng seeded with config.seed, and scales the
    /// reservoir by config.alpha. The unscaled draw is kept so bounds
    /// can be recomputed and the model rescaled.
    static EsnModel init(const ReservoirConfig& config);

    /// Reassembles a model from its stored parts (file loading, tests).
    /// w_r is re-derived as alpha * w_r_initial.
    static EsnModel from_parts(const ReservoirConfig& config, Matrix w_in, Matrix w_r_initial,
                               std::optional<Matrix> w_out);

    const ReservoirConfig& config() const noexcept { return config_; }
    const Matrix& w_in() const noexcept { return w_in_; }
    const Matrix& w_r() const noexcept { return w_r_; }
    const Matrix& w_r_initial() const noexcept { return w_r_initial_; }

    bool trained() const noexcept { return w_out_.has_value(); }
    const Matrix& w_out() const;

    /// Replaces the readout (externally computed or loaded).
    void set_w_out(Matrix w_out);

    /// Re-derives w_r = alpha * w_r_initial and drops any trained
    /// readout (it was fit to the old dynamics).
    void rescale(double alpha);

    /// One step of the recurrence: tanh(w_in [a;1] + w_r s).
    std::vector<double> update_state(std::span<const double> s,
                                     std::span<const double> a) const;

    /// Iterates update_state over the inputs from s(0) (zero when s0 is
    /// empty) and records every state. Throws DegenerateInputError when
    /// nothing remains after the washout.
    StateTrajectory harvest(const TimeSeries& inputs, std::span<const double> s0 = {}) const;

    /// Harvests, drops the washout columns from states and targets, and
    /// fits the readout by ridge regression with this->config().gamma.
    void train(const TimeSeries& inputs, const TimeSeries& targets);

    /// y(t) = w_out s(t) for every post-washout state of the inputs.
    TimeSeries predict_teacher_forced(const TimeSeries& inputs) const;

    /// Drives the reservoir with the warmup sequence, then closes the
    /// loop: each prediction is fed back as the next input. Returns the
    /// `horizon` predictions. Requires n_a == n_b.
    TimeSeries predict_free_run(const TimeSeries& warmup, std::size_t horizon) const;

private:
    ReservoirConfig config_;
    Matrix w_in_;
    Matrix w_r_;
    Matrix w_r_initial_;
    std::optional<Matrix> w_out_;
};

/// Normalized root mean squared error
///   sqrt( mean ||b(t) - y(t)||^2 / mean ||b(t) - mean(b)||^2 );
/// 1.0 is the mean-predictor baseline. Throws DegenerateInputError for a
/// constant target.
double nrmse(const TimeSeries& y, const TimeSeries& b);

/// Single-document JSON save/load of config, weight matrices and the
/// unscaled reservoir. Atomic write.
void save_model(const std::string& path, const EsnModel& model);
EsnModel load_model(const std::string& path);

}  // namespace esn

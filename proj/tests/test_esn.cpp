#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "esn/errors.hpp"
#include "esn/matrix.hpp"
#include "esn/model.hpp"
#include "esn/rng.hpp"
#include "esn/timeseries.hpp"

using esn::EsnModel;
using esn::Matrix;
using esn::ReservoirConfig;
using esn::TimeSeries;

namespace {

TimeSeries constant_series(std::size_t n, double value) {
    TimeSeries ts;
    ts.dim = 1;
    ts.values.assign(n, value);
    return ts;
}

TimeSeries scalar_series(std::vector<double> values) {
    TimeSeries ts;
    ts.dim = 1;
    ts.values = std::move(values);
    return ts;
}

// Minimal hand-assembled model: explicit weights, no randomness.
EsnModel toy_model(double w_a, double w_bias, double w_res, double alpha = 1.0,
                   std::size_t washout = 0) {
    ReservoirConfig config;
    config.n_s = 1;
    config.n_a = 1;
    config.n_b = 1;
    config.alpha = alpha;
    config.washout = washout;
    return EsnModel::from_parts(config, Matrix{{w_a, w_bias}}, Matrix{{w_res}}, std::nullopt);
}

}  // namespace

TEST_CASE("config validation: hard errors and the small-reservoir warning") {
    ReservoirConfig config;
    config.n_s = 2;
    config.n_a = 4;
    CHECK_FALSE(config.validate().empty());  // n_s < n_a warns but passes

    ReservoirConfig bad = config;
    bad.init_low = 0.5;
    bad.init_high = -0.5;
    CHECK_THROWS_AS(bad.validate(), esn::ParameterError);
    bad = config;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(bad.validate(), esn::ParameterError);
    bad = config;
    bad.gamma = -1.0;
    CHECK_THROWS_AS(bad.validate(), esn::ParameterError);
    bad = config;
    bad.n_s = 0;
    CHECK_THROWS_AS(bad.validate(), esn::ParameterError);
}

TEST_CASE("init draws reproducibly with the configured range and moments") {
    ReservoirConfig config;
    config.n_s = 1000;
    config.seed = 77;
    const EsnModel a = EsnModel::init(config);
    const EsnModel b = EsnModel::init(config);
    CHECK(a.w_r_initial() == b.w_r_initial());
    CHECK(a.w_in() == b.w_in());
    CHECK(a.w_r() == b.w_r());

    double mean = 0.0;
    for (double v : a.w_r_initial().entries()) {
        CHECK(v >= -0.5);
        CHECK(v < 0.5);
        mean += v;
    }
    const auto count = static_cast<double>(a.w_r_initial().entries().size());
    mean /= count;
    CHECK(std::abs(mean) < 0.005);
    double var = 0.0;
    for (double v : a.w_r_initial().entries()) var += (v - mean) * (v - mean);
    var /= count;
    CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.05));

    const EsnModel c = EsnModel::init([&] {
        auto cfg = config;
        cfg.seed = 78;
        return cfg;
    }());
    CHECK_FALSE(a.w_r_initial() == c.w_r_initial());
}

TEST_CASE("w_r is exactly alpha times the recorded initial matrix") {
    ReservoirConfig config;
    config.n_s = 40;
    config.alpha = 0.37;
    config.seed = 5;
    EsnModel m = EsnModel::init(config);
    CHECK(m.w_r() == m.w_r_initial().scaled(0.37));
    m.rescale(1.9);
    CHECK(m.config().alpha == 1.9);
    CHECK(m.w_r() == m.w_r_initial().scaled(1.9));
    CHECK_THROWS_AS(m.rescale(0.0), esn::ParameterError);
}

TEST_CASE("update_state: fixed points, scalar value, tanh range") {
    // Zero input, zero state, zero bias weights stay at zero.
    ReservoirConfig config;
    config.n_s = 2;
    EsnModel zero_bias = EsnModel::from_parts(config, Matrix{{0.4, 0.0}, {-0.3, 0.0}},
                                              Matrix{{0.1, 0.2}, {0.3, 0.4}}, std::nullopt);
    const std::vector<double> s0{0.0, 0.0};
    const std::vector<double> a0{0.0};
    CHECK(zero_bias.update_state(s0, a0) == std::vector<double>{0.0, 0.0});

    // One-neuron closed form.
    EsnModel toy = toy_model(1.0, 0.0, 0.5);
    const std::vector<double> one{1.0};
    const auto next = toy.update_state(one, a0);
    CHECK(next[0] == doctest::Approx(std::tanh(0.5)).epsilon(1e-12));
    CHECK(next[0] == doctest::Approx(0.46212).epsilon(1e-4));

    // Any state stays strictly inside (-1, 1).
    ReservoirConfig big;
    big.n_s = 50;
    big.alpha = 40.0;  // deliberately explosive
    big.seed = 3;
    EsnModel wild = EsnModel::init(big);
    esn::Rng rng(1);
    std::vector<double> s(50);
    for (auto& v : s) v = rng.uniform(-1.0, 1.0);
    for (int step = 0; step < 20; ++step) {
        s = wild.update_state(s, std::vector<double>{rng.uniform(-5.0, 5.0)});
        for (double v : s) {
            CHECK(v > -1.0);
            CHECK(v < 1.0);
        }
    }

    CHECK_THROWS_AS(toy.update_state(std::vector<double>{1.0, 2.0}, a0), esn::ShapeError);
    CHECK_THROWS_AS(toy.update_state(one, std::vector<double>{}), esn::ShapeError);
}

TEST_CASE("harvest: washout bookkeeping and degenerate lengths") {
    ReservoirConfig config;
    config.n_s = 10;
    config.washout = 5;
    config.seed = 2;
    const EsnModel m = EsnModel::init(config);

    CHECK_THROWS_AS(m.harvest(constant_series(5, 0.1)), esn::DegenerateInputError);
    const auto traj = m.harvest(constant_series(6, 0.1));
    CHECK(traj.states.cols() == 6);
    CHECK(traj.t_offset == 5);
    CHECK(traj.post_washout_count() == 1);
    for (double v : traj.states.entries()) {
        CHECK(v > -1.0);
        CHECK(v < 1.0);
    }
    CHECK_THROWS_AS(m.harvest(esn::gen_lorenz(100, 0.01)), esn::ShapeError);
}

TEST_CASE("harvest forgets its initial state under contraction") {
    ReservoirConfig config;
    config.n_s = 50;
    config.washout = 100;
    config.seed = 21;
    EsnModel m = EsnModel::init(config);
    const double eta0 = esn::largest_singular_value(m.w_r_initial());
    m.rescale(0.8 / eta0);  // eta(w_r) = 0.8 < 1: guaranteed fading memory

    const TimeSeries inputs = esn::gen_mso(160, 0.0, 0);
    std::vector<double> other_start(50, 0.0);
    other_start[0] = 1.0;  // distance 1 from the zero start
    const auto from_zero = m.harvest(inputs);
    const auto from_other = m.harvest(inputs, other_start);
    for (std::size_t t = from_zero.t_offset; t < from_zero.states.cols(); ++t) {
        double gap2 = 0.0;
        for (std::size_t i = 0; i < 50; ++i) {
            const double d = from_zero.states(i, t) - from_other.states(i, t);
            gap2 += d * d;
        }
        CHECK(std::sqrt(gap2) < 1e-6);
    }
}

TEST_CASE("train: zero targets give an exactly zero readout") {
    ReservoirConfig config;
    config.n_s = 15;
    config.washout = 10;
    config.gamma = 1e-3;
    config.seed = 9;
    EsnModel m = EsnModel::init(config);
    m.train(esn::gen_mso(200, 0.0, 1), constant_series(200, 0.0));
    REQUIRE(m.trained());
    for (double v : m.w_out().entries()) CHECK(v == 0.0);

    CHECK_THROWS_AS(m.train(constant_series(10, 0.0), constant_series(9, 0.0)),
                    esn::ShapeError);
}

TEST_CASE("trained readout sits at a ridge-objective minimum") {
    ReservoirConfig config;
    config.n_s = 20;
    config.washout = 20;
    config.gamma = 0.01;
    config.seed = 4;
    EsnModel m = EsnModel::init(config);
    const double eta0 = esn::largest_singular_value(m.w_r_initial());
    m.rescale(0.9 / eta0);

    const TimeSeries data = esn::gen_mackey_glass(501, 17.0, 0.1, 1.2);
    const TimeSeries inputs = data.slice(0, 500);
    const TimeSeries targets = data.slice(1, 500);
    m.train(inputs, targets);

    const auto traj = m.harvest(inputs);
    const std::size_t kept = traj.post_washout_count();
    const auto objective = [&](const Matrix& w) {
        double acc = 0.0;
        for (std::size_t t = 0; t < kept; ++t) {
            double y = 0.0;
            for (std::size_t i = 0; i < 20; ++i) {
                y += w(0, i) * traj.states(i, traj.t_offset + t);
            }
            const double e = targets.scalar(traj.t_offset + t) - y;
            acc += e * e;
        }
        for (double v : w.entries()) acc += config.gamma * config.gamma * v * v;
        return acc;
    };

    const double base = objective(m.w_out());
    esn::Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        Matrix perturbed = m.w_out();
        for (std::size_t i = 0; i < 20; ++i) perturbed(0, i) += 1e-4 * rng.uniform(-1.0, 1.0);
        CHECK(objective(perturbed) >= base);
    }
}

TEST_CASE("predict_teacher_forced: zero and selector readouts, scalar oracle") {
    ReservoirConfig config;
    config.n_s = 8;
    config.washout = 3;
    config.seed = 12;
    EsnModel m = EsnModel::init(config);
    const TimeSeries inputs = esn::gen_mso(40, 0.0, 0);

    CHECK_THROWS_AS(m.predict_teacher_forced(inputs), esn::NotTrainedError);

    m.set_w_out(Matrix(1, 8));
    for (double v : m.predict_teacher_forced(inputs).values) CHECK(v == 0.0);

    Matrix selector(1, 8);
    selector(0, 5) = 1.0;
    m.set_w_out(selector);
    const auto traj = m.harvest(inputs);
    const auto picked = m.predict_teacher_forced(inputs);
    REQUIRE(picked.size() == traj.post_washout_count());
    for (std::size_t t = 0; t < picked.size(); ++t) {
        CHECK(picked.scalar(t) == traj.states(5, traj.t_offset + t));
    }

    // One-neuron model against a hand recurrence.
    EsnModel toy = toy_model(0.7, -0.1, 0.4, 1.0, 2);
    toy.set_w_out(Matrix{{2.5}});
    const TimeSeries toy_in = scalar_series({0.3, -0.2, 0.5, 0.9, -0.6, 0.1});
    double s = 0.0;
    std::vector<double> expected;
    for (std::size_t t = 0; t < toy_in.size(); ++t) {
        s = std::tanh(0.7 * toy_in.scalar(t) - 0.1 + 0.4 * s);
        if (t >= 2) expected.push_back(2.5 * s);
    }
    const auto toy_out = toy.predict_teacher_forced(toy_in);
    REQUIRE(toy_out.values.size() == expected.size());
    for (std::size_t t = 0; t < expected.size(); ++t) {
        CHECK(toy_out.values[t] == doctest::Approx(expected[t]).epsilon(1e-14));
    }
}

TEST_CASE("readout is linear: predictions add when readouts add") {
    ReservoirConfig config;
    config.n_s = 12;
    config.washout = 4;
    config.seed = 31;
    EsnModel m = EsnModel::init(config);
    const TimeSeries inputs = esn::gen_mso(50, 0.0, 2);
    esn::Rng rng(8);
    Matrix u(1, 12);
    Matrix v(1, 12);
    Matrix sum(1, 12);
    for (std::size_t i = 0; i < 12; ++i) {
        u(0, i) = rng.uniform(-1.0, 1.0);
        v(0, i) = rng.uniform(-1.0, 1.0);
        sum(0, i) = u(0, i) + v(0, i);
    }
    m.set_w_out(u);
    const auto yu = m.predict_teacher_forced(inputs);
    m.set_w_out(v);
    const auto yv = m.predict_teacher_forced(inputs);
    m.set_w_out(sum);
    const auto ys = m.predict_teacher_forced(inputs);
    for (std::size_t t = 0; t < ys.size(); ++t) {
        CHECK(ys.scalar(t) == doctest::Approx(yu.scalar(t) + yv.scalar(t)).epsilon(1e-12));
    }
}

TEST_CASE("predict_free_run: degenerate horizons and the no-feedback boundary") {
    ReservoirConfig config;
    config.n_s = 25;
    config.washout = 10;
    config.gamma = 1e-4;
    config.seed = 14;
    EsnModel m = EsnModel::init(config);
    const double eta0 = esn::largest_singular_value(m.w_r_initial());
    m.rescale(1.0 / eta0);

    const TimeSeries data = esn::gen_mackey_glass(400, 17.0, 0.1, 1.2);
    m.train(data.slice(0, 300), data.slice(1, 300));

    const TimeSeries warmup = data.slice(300, 50);
    CHECK(m.predict_free_run(warmup, 0).size() == 0);

    // Horizon 1 never feeds back: it must equal the last teacher-forced
    // prediction over the warmup inputs.
    const auto one = m.predict_free_run(warmup, 1);
    const auto forced = m.predict_teacher_forced(warmup);
    REQUIRE(one.size() == 1);
    CHECK(one.scalar(0) == forced.scalar(forced.size() - 1));

    CHECK_THROWS_AS(m.predict_free_run(TimeSeries{}, 3), esn::ParameterError);

    ReservoirConfig rect = config;
    rect.n_b = 2;
    EsnModel mismatched = EsnModel::init(rect);
    mismatched.set_w_out(Matrix(2, 25));
    CHECK_THROWS_AS(mismatched.predict_free_run(warmup, 3), esn::ShapeError);
}

TEST_CASE("nrmse: exact cases and degenerate target") {
    const TimeSeries target = scalar_series({0.0, 2.0});
    CHECK(esn::nrmse(target, target) == 0.0);
    CHECK(esn::nrmse(scalar_series({1.0, 1.0}), target) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(esn::nrmse(scalar_series({1.0}), target), esn::ShapeError);
    CHECK_THROWS_AS(esn::nrmse(scalar_series({1.0, 1.0}), scalar_series({3.0, 3.0})),
                    esn::DegenerateInputError);

    // Predicting the mean scores exactly 1 for any non-constant target.
    const TimeSeries wave = esn::gen_mso(64, 0.0, 0);
    double mean = 0.0;
    for (double v : wave.values) mean += v;
    mean /= static_cast<double>(wave.size());
    CHECK(esn::nrmse(constant_series(64, mean), wave) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("full pipeline is bit-deterministic for a fixed seed") {
    const TimeSeries data = esn::gen_mackey_glass(600, 17.0, 0.1, 1.2);
    const auto run = [&] {
        ReservoirConfig config;
        config.n_s = 30;
        config.washout = 50;
        config.gamma = 1e-4;
        config.seed = 1234;
        EsnModel m = EsnModel::init(config);
        const double eta0 = esn::largest_singular_value(m.w_r_initial());
        m.rescale(1.0 / eta0);
        m.train(data.slice(0, 500), data.slice(1, 500));
        return m.predict_free_run(data.slice(500, 60), 20).values;
    };
    CHECK(run() == run());
}

TEST_CASE("model JSON round-trips exactly") {
    const auto path = (std::filesystem::temp_directory_path() / "esn_model_test.json").string();
    ReservoirConfig config;
    config.n_s = 12;
    config.n_a = 3;
    config.n_b = 3;
    config.alpha = 0.73;
    config.gamma = 1e-4;
    config.washout = 7;
    config.seed = 99;
    EsnModel m = EsnModel::init(config);

    esn::save_model(path, m);
    const EsnModel untrained = esn::load_model(path);
    CHECK_FALSE(untrained.trained());
    CHECK(untrained.w_in() == m.w_in());
    CHECK(untrained.w_r_initial() == m.w_r_initial());
    CHECK(untrained.w_r() == m.w_r());
    CHECK(untrained.config().alpha == config.alpha);
    CHECK(untrained.config().seed == config.seed);

    const TimeSeries data = esn::gen_lorenz(400, 0.01);
    const auto norm = esn::normalize_01(data).series;
    m.train(norm.slice(0, 300), norm.slice(1, 300));
    esn::save_model(path, m);
    const EsnModel trained = esn::load_model(path);
    REQUIRE(trained.trained());
    CHECK(trained.w_out() == m.w_out());
    CHECK(trained.predict_teacher_forced(norm.slice(300, 99)).values ==
          m.predict_teacher_forced(norm.slice(300, 99)).values);

    std::ofstream bad(path);
    bad << "{\"config\": 3}";
    bad.close();
    CHECK_THROWS_AS(esn::load_model(path), esn::ParameterError);
    std::filesystem::remove(path);
}

#include "esn/experiment.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <span>
#include <thread>

#include "esn/errors.hpp"
#include "esn/esp.hpp"
#include "esn/mmds.hpp"
#include "esn/model.hpp"
#include "esn/rng.hpp"

namespace esn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Free-run evaluation drives the reservoir with washout + this many
// leading test samples before closing the loop.
constexpr std::size_t kFreeRunWarmupTail = 200;

// Salts for derive_seed so the dataset stream never collides with a
// trial stream.
constexpr std::uint64_t kDataSaltA = 0xDA7A;
constexpr std::uint64_t kDataSaltB = 0x5EED;

struct BenchmarkInfo {
    std::string name;
    std::size_t dim;
    std::size_t n_train;
    std::size_t n_test;
    double default_gamma;
    std::vector<std::size_t> default_sizes;
};

const std::vector<BenchmarkInfo>& benchmark_table() {
    static const std::vector<BenchmarkInfo> table = {
        {"mackey-glass", 1, 10000, 2000, 1e-4, {20, 50, 75, 100, 150, 200, 250, 500, 750, 1000}},
        {"mso", 1, 10000, 1000, 1e-3, {20, 50, 75, 100, 150, 200, 250, 300, 400, 500}},
        {"lorenz", 3, 13107, 3277, 1e-3, {20, 50, 75, 100, 150, 200, 250, 300, 400, 500}},
        {"rossler", 3, 10000, 2000, 1e-3, {20, 50, 75, 100, 150, 200, 250, 300, 400, 500}},
        {"henon", 1, 10000, 2000, 1e-3, {20, 50, 75, 100, 150, 200, 250, 300, 400, 500}},
    };
    return table;
}

const BenchmarkInfo& benchmark_info(const std::string& name) {
    for (const auto& info : benchmark_table()) {
        if (info.name == name) return info;
    }
    throw ParameterError("unknown benchmark '" + name +
                         "' (expected mackey-glass, mso, lorenz, rossler or henon)");
}

TimeSeries generate_raw(const BenchmarkInfo& info, std::size_t n, std::uint64_t seed) {
    if (info.name == "mackey-glass") return gen_mackey_glass(n, 17.0, 0.1, 1.2, seed);
    if (info.name == "mso") return gen_mso(n, 0.01, seed);
    if (info.name == "lorenz") return gen_lorenz(n, 0.01);
    if (info.name == "rossler") return gen_rossler(n, 0.05);
    return gen_henon(n);
}

// Inputs/targets for one-step-ahead prediction on a single series.
std::pair<TimeSeries, TimeSeries> one_step_task(const TimeSeries& s) {
    return {s.slice(0, s.size() - 1), s.slice(1, s.size() - 1)};
}

// Readout applied to the post-washout columns of an existing trajectory
// (predict_teacher_forced without the second harvest).
TimeSeries apply_readout(const EsnModel& model, const StateTrajectory& traj, double dt) {
    const Matrix& readout = model.w_out();
    const std::size_t n_b = readout.rows();
    const std::size_t n_s = readout.cols();
    const std::size_t t_kept = traj.post_washout_count();
    TimeSeries out;
    out.dim = n_b;
    out.dt = dt;
    out.values.resize(t_kept * n_b);
    for (std::size_t t = 0; t < t_kept; ++t) {
        for (std::size_t d = 0; d < n_b; ++d) {
            const auto w = readout.row(d);
            double acc = 0.0;
            for (std::size_t i = 0; i < n_s; ++i) acc += w[i] * traj.states(i, traj.t_offset + t);
            out.values[t * n_b + d] = acc;
        }
    }
    return out;
}

struct CellContext {
    std::uint64_t seed = 0;
    std::size_t n_s = 0;
    EsnModel model;  // drawn once per (size, trial); alpha applied later
    SpectralBounds bounds;
    std::vector<double> alphas;
};

CellContext prepare_cell(const SweepPlan& plan, std::size_t size_index, std::size_t trial_index) {
    const BenchmarkInfo& info = benchmark_info(plan.benchmark);
    CellContext cell;
    cell.n_s = plan.sizes.at(size_index);
    cell.seed = derive_seed(plan.base_seed, size_index, trial_index);
    ReservoirConfig config;
    config.n_s = cell.n_s;
    config.n_a = info.dim;
    config.n_b = info.dim;
    config.init_low = -0.5;
    config.init_high = 0.5;
    config.alpha = 1.0;  // placeholder until rescale
    config.gamma = plan.gamma;
    config.washout = plan.washout;
    config.seed = cell.seed;
    cell.model = EsnModel::init(config);
    cell.bounds = compute_bounds(cell.model.w_r_initial());  // may throw ConvergenceError
    cell.alphas = ituc_grid(cell.bounds, plan.k_alphas);
    return cell;
}

SweepRecord blank_record(const SweepPlan& plan, std::size_t size_index, std::size_t alpha_index,
                         std::size_t trial_index) {
    SweepRecord rec;
    rec.benchmark = plan.benchmark;
    rec.n_s = plan.sizes.at(size_index);
    rec.size_index = size_index + 1;
    rec.alpha_index = alpha_index + 1;
    rec.trial_index = trial_index + 1;
    rec.seed = derive_seed(plan.base_seed, size_index, trial_index);
    rec.alpha = kNaN;
    rec.eta = kNaN;
    rec.rho = kNaN;
    rec.nrmse = kNaN;
    rec.mmds = kNaN;
    rec.status = TrialStatus::kNonConverged;
    return rec;
}

SweepRecord eval_alpha(const SweepPlan& plan, const BenchmarkData& data, CellContext& cell,
                       std::size_t size_index, std::size_t alpha_index,
                       std::size_t trial_index) {
    SweepRecord rec = blank_record(plan, size_index, alpha_index, trial_index);
    rec.alpha = cell.alphas.at(alpha_index);
    rec.eta = cell.bounds.eta;
    rec.rho = cell.bounds.rho;

    const auto [train_in, train_target] = one_step_task(data.train);
    const auto [test_in, test_target] = one_step_task(data.test);

    StateTrajectory test_traj;
    try {
        cell.model.rescale(rec.alpha);
        cell.model.train(train_in, train_target);
        test_traj = cell.model.harvest(test_in);
        if (plan.eval_mode == EvalMode::kTeacherForced) {
            const TimeSeries pred = apply_readout(cell.model, test_traj, test_in.dt);
            const TimeSeries truth =
                test_target.slice(plan.washout, test_target.size() - plan.washout);
            rec.nrmse = nrmse(pred, truth);
        } else {
            const std::size_t warmup_len = free_run_warmup_length(plan);
            const TimeSeries warmup = data.test.slice(0, warmup_len);
            const TimeSeries pred = cell.model.predict_free_run(warmup, plan.free_run_horizon);
            const TimeSeries truth = data.test.slice(warmup_len, plan.free_run_horizon);
            rec.nrmse = nrmse(pred, truth);
        }
    } catch (const NumericError&) {
        return rec;  // status stays non-converged, measurements NaN
    }

    rec.status = TrialStatus::kOk;
    try {
        const MmdsWindow window{test_traj.states.cols() - kMmdsWindowLength, kMmdsWindowLength};
        rec.mmds = mmds(test_in, test_traj, window);
    } catch (const DegeneratePairError&) {
        rec.mmds = kNaN;
        rec.status = TrialStatus::kDegenerateMmds;
    }
    return rec;
}

// Evaluates one (size, trial) cell into `out` (k_alphas slots). Numeric
// failures never escape; anything else propagates and aborts the sweep.
void run_cell(const SweepPlan& plan, const BenchmarkData& data, std::size_t size_index,
              std::size_t trial_index, std::span<SweepRecord> out) {
    try {
        CellContext cell = prepare_cell(plan, size_index, trial_index);
        for (std::size_t j = 0; j < plan.k_alphas; ++j) {
            out[j] = eval_alpha(plan, data, cell, size_index, j, trial_index);
        }
    } catch (const NumericError&) {
        // Bounds failed: the whole cell is unmeasurable.
        for (std::size_t j = 0; j < plan.k_alphas; ++j) {
            out[j] = blank_record(plan, size_index, j, trial_index);
        }
    }
}

}  // namespace

std::string to_string(EvalMode mode) {
    return mode == EvalMode::kFreeRun ? "free-run" : "teacher-forced";
}

EvalMode eval_mode_from_string(const std::string& s) {
    if (s == "free-run") return EvalMode::kFreeRun;
    if (s == "teacher-forced") return EvalMode::kTeacherForced;
    throw ParameterError("unknown eval mode '" + s + "' (free-run or teacher-forced)");
}

std::string to_string(TrialStatus status) {
    switch (status) {
        case TrialStatus::kOk: return "ok";
        case TrialStatus::kDegenerateMmds: return "degenerate-mmds";
        case TrialStatus::kNonConverged: return "non-converged";
    }
    return "unknown";
}

TrialStatus trial_status_from_string(const std::string& s) {
    if (s == "ok") return TrialStatus::kOk;
    if (s == "degenerate-mmds") return TrialStatus::kDegenerateMmds;
    if (s == "non-converged") return TrialStatus::kNonConverged;
    throw ParameterError("unknown trial status '" + s + "'");
}

const std::vector<std::string>& benchmark_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& info : benchmark_table()) out.push_back(info.name);
        return out;
    }();
    return names;
}

std::size_t benchmark_dim(const std::string& name) { return benchmark_info(name).dim; }

std::size_t free_run_warmup_length(const SweepPlan& plan) {
    return plan.washout + kFreeRunWarmupTail;
}

BenchmarkData make_benchmark_data(const std::string& name, std::uint64_t base_seed) {
    const BenchmarkInfo& info = benchmark_info(name);
    const std::uint64_t data_seed = derive_seed(base_seed, kDataSaltA, kDataSaltB);
    const TimeSeries raw = generate_raw(info, info.n_train + info.n_test, data_seed);
    const Normalized norm = normalize_01(raw);
    auto [train, test] = split(norm.series, {info.n_train, info.n_test, 0});
    return {std::move(train), std::move(test)};
}

SweepPlan make_default_plan(const std::string& benchmark) {
    const BenchmarkInfo& info = benchmark_info(benchmark);
    SweepPlan plan;
    plan.benchmark = info.name;
    plan.sizes = info.default_sizes;
    plan.k_alphas = 10;
    plan.n_trials = 30;
    plan.gamma = info.default_gamma;
    plan.washout = 100;
    plan.eval_mode = EvalMode::kFreeRun;
    plan.free_run_horizon = 84;
    plan.base_seed = 1;
    return plan;
}

void SweepPlan::validate() const {
    const BenchmarkInfo& info = benchmark_info(benchmark);
    if (sizes.empty()) throw ParameterError("plan: sizes must not be empty");
    for (std::size_t s : sizes) {
        if (s == 0) throw ParameterError("plan: reservoir sizes must be positive");
    }
    if (k_alphas < 2) throw ParameterError("plan: k_alphas must be at least 2");
    if (n_trials == 0) throw ParameterError("plan: n_trials must be positive");
    if (!(gamma >= 0.0)) throw ParameterError("plan: gamma must be non-negative");
    if (info.n_train < washout + 2) {
        throw ParameterError("plan: washout leaves no training data");
    }
    const std::size_t test_inputs = info.n_test - 1;
    if (test_inputs < washout + kMmdsWindowLength) {
        throw ParameterError("plan: test split too short for the MMDS window after washout");
    }
    if (eval_mode == EvalMode::kFreeRun) {
        if (free_run_horizon == 0) {
            throw ParameterError("plan: free-run horizon must be positive");
        }
        if (info.n_test < free_run_warmup_length(*this) + free_run_horizon) {
            throw ParameterError("plan: test split too short for free-run warmup plus horizon");
        }
    }
}

SweepRecord run_trial(const SweepPlan& plan, std::size_t size_index, std::size_t alpha_index,
                      std::size_t trial_index, const BenchmarkData* cached) {
    plan.validate();
    if (size_index >= plan.sizes.size() || alpha_index >= plan.k_alphas ||
        trial_index >= plan.n_trials) {
        throw ParameterError("run_trial: index outside the plan");
    }
    BenchmarkData local;
    if (!cached) {
        local = make_benchmark_data(plan.benchmark, plan.base_seed);
        cached = &local;
    }
    try {
        CellContext cell = prepare_cell(plan, size_index, trial_index);
        return eval_alpha(plan, *cached, cell, size_index, alpha_index, trial_index);
    } catch (const NumericError&) {
        return blank_record(plan, size_index, alpha_index, trial_index);
    }
}

std::vector<SweepRecord> run_sweep(const SweepPlan& plan, unsigned workers) {
    plan.validate();
    const BenchmarkData data = make_benchmark_data(plan.benchmark, plan.base_seed);
    const std::size_t n_cells = plan.sizes.size() * plan.n_trials;
    std::vector<SweepRecord> records(plan.total_trials());

    unsigned n_workers = workers ? workers : std::thread::hardware_concurrency();
    if (n_workers == 0) n_workers = 1;
    n_workers = static_cast<unsigned>(std::min<std::size_t>(n_workers, n_cells));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    const auto worker_body = [&] {
        for (;;) {
            const std::size_t cell = next.fetch_add(1);
            if (cell >= n_cells || failed.load()) break;
            const std::size_t size_index = cell / plan.n_trials;
            const std::size_t trial_index = cell % plan.n_trials;
            try {
                run_cell(plan, data, size_index, trial_index,
                         {records.data() + cell * plan.k_alphas, plan.k_alphas});
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                break;
            }
        }
    };

    if (n_workers <= 1) {
        worker_body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker_body);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return records;
}

std::pair<SurfaceGrid, SurfaceGrid> aggregate(const std::vector<SweepRecord>& records) {
    if (records.empty()) throw ParameterError("aggregate: no records");
    const std::string& benchmark = records.front().benchmark;
    std::size_t n_sizes = 0;
    std::size_t k = 0;
    for (const auto& rec : records) {
        if (rec.benchmark != benchmark) {
            throw ParameterError("aggregate: records mix benchmarks '" + benchmark + "' and '" +
                                 rec.benchmark + "'");
        }
        if (rec.size_index == 0 || rec.alpha_index == 0) {
            throw ParameterError("aggregate: record indices must be 1-based");
        }
        n_sizes = std::max(n_sizes, rec.size_index);
        k = std::max(k, rec.alpha_index);
    }
    SurfaceGrid nrmse_surface;
    nrmse_surface.sizes.assign(n_sizes, 0);
    nrmse_surface.k_alphas = k;
    nrmse_surface.mean.assign(n_sizes * k, 0.0);
    nrmse_surface.count.assign(n_sizes * k, 0);
    SurfaceGrid mmds_surface = nrmse_surface;

    for (const auto& rec : records) {
        nrmse_surface.sizes[rec.size_index - 1] = rec.n_s;
        mmds_surface.sizes[rec.size_index - 1] = rec.n_s;
        if (rec.status != TrialStatus::kOk) continue;
        const std::size_t cell = (rec.size_index - 1) * k + (rec.alpha_index - 1);
        nrmse_surface.mean[cell] += rec.nrmse;
        nrmse_surface.count[cell] += 1;
        mmds_surface.mean[cell] += rec.mmds;
        mmds_surface.count[cell] += 1;
    }
    for (std::size_t cell = 0; cell < n_sizes * k; ++cell) {
        if (nrmse_surface.count[cell] == 0) {
            nrmse_surface.mean[cell] = kNaN;
            mmds_surface.mean[cell] = kNaN;
        } else {
            nrmse_surface.mean[cell] /= static_cast<double>(nrmse_surface.count[cell]);
            mmds_surface.mean[cell] /= static_cast<double>(mmds_surface.count[cell]);
        }
    }
    return {std::move(nrmse_surface), std::move(mmds_surface)};
}

}  // namespace esn

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "esn/timeseries.hpp"

namespace esn {

enum class EvalMode {
    kFreeRun,         ///< closed loop: predictions feed back as inputs
    kTeacherForced,   ///< one step ahead on ground-truth inputs
};

std::string to_string(EvalMode mode);
EvalMode eval_mode_from_string(const std::string& s);

/// One benchmark sweep: |sizes| reservoir sizes x k_alphas scaling
/// factors x n_trials seeded repetitions. Within a (size, trial) cell
/// all k_alphas evaluations share one reservoir/input-weight draw and
/// one bounds computation; only the scaling differs.
struct SweepPlan {
    std::string benchmark;
    std::vector<std::size_t> sizes;
    std::size_t k_alphas = 10;
    std::size_t n_trials = 30;
    double gamma = 1e-3;
    std::size_t washout = 100;
    EvalMode eval_mode = EvalMode::kFreeRun;
    std::size_t free_run_horizon = 84;
    std::uint64_t base_seed = 1;

    std::size_t total_trials() const { return sizes.size() * k_alphas * n_trials; }

    /// Throws ParameterError on malformed plans (unknown benchmark,
    /// empty axes, washout too large for the benchmark's test split).
    void validate() const;
};

enum class TrialStatus {
    kOk,
    kDegenerateMmds,   ///< colliding reservoir states; MMDS missing
    kNonConverged,     ///< a numeric stage failed; measurements missing
};

std::string to_string(TrialStatus status);
TrialStatus trial_status_from_string(const std::string& s);

/// One evaluated (benchmark, size, alpha, trial) coordinate. The index
/// fields are 1-based, matching the CSV output; missing measurements
/// are NaN.
struct SweepRecord {
    std::string benchmark;
    std::size_t n_s = 0;
    std::size_t size_index = 0;   ///< 1-based
    std::size_t alpha_index = 0;  ///< 1-based
    std::size_t trial_index = 0;  ///< 1-based
    std::uint64_t seed = 0;
    double alpha = 0.0;
    double eta = 0.0;
    double rho = 0.0;
    double nrmse = 0.0;
    double mmds = 0.0;
    TrialStatus status = TrialStatus::kOk;
};

/// Per-cell trial means over one benchmark's records, keyed by
/// (size_index, alpha_index) since the absolute alpha values differ per
/// trial. Cells without valid trials hold NaN and count 0.
struct SurfaceGrid {
    std::vector<std::size_t> sizes;  ///< n_s per size_index
    std::size_t k_alphas = 0;
    std::vector<double> mean;        ///< row-major [size][alpha]
    std::vector<std::size_t> count;  ///< status-ok trials per cell

    double at(std::size_t size_idx0, std::size_t alpha_idx0) const {
        return mean[size_idx0 * k_alphas + alpha_idx0];
    }
};

/// Normalized train/test split of one benchmark.
struct BenchmarkData {
    TimeSeries train;
    TimeSeries test;
};

/// The five recognized benchmark names.
const std::vector<std::string>& benchmark_names();

std::size_t benchmark_dim(const std::string& name);

/// Generates, normalizes to [0,1] per dimension, and splits one
/// benchmark deterministically. The data seed is derived from base_seed
/// with a fixed salt, so one plan sees one dataset.
BenchmarkData make_benchmark_data(const std::string& name, std::uint64_t base_seed);

/// The benchmark's customary plan: its default size ladder and ridge
/// regularizer, k = 10 alphas, 30 trials, washout 100, free-run scoring
/// over an 84-step horizon.
SweepPlan make_default_plan(const std::string& benchmark);

/// Runs one coordinate standalone (indices 0-based). Regenerates the
/// benchmark data unless `cached` is supplied; bit-identical to the
/// corresponding run_sweep record.
SweepRecord run_trial(const SweepPlan& plan, std::size_t size_index, std::size_t alpha_index,
                      std::size_t trial_index, const BenchmarkData* cached = nullptr);

/// Runs the whole plan over a worker pool (workers = 0 picks the
/// hardware concurrency). Numeric failures become per-record statuses;
/// the result is always complete and in canonical order (size-major,
/// then trial, then alpha) regardless of scheduling.
std::vector<SweepRecord> run_sweep(const SweepPlan& plan, unsigned workers = 0);

/// Per-cell means over status-ok records of one benchmark:
/// (nrmse surface, mmds surface).
std::pair<SurfaceGrid, SurfaceGrid> aggregate(const std::vector<SweepRecord>& records);

/// Results CSV (one row per trial, canonical order, full-precision
/// decimals). A leading '#' metadata line records the measurement
/// conventions. Atomic write.
void write_records_csv(const std::string& path, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_records_csv(const std::string& path);

/// Surface CSV: n_s,alpha_index,mean_nrmse,mean_mmds,valid_count.
void write_surface_csv(const std::string& path, const SurfaceGrid& nrmse_surface,
                       const SurfaceGrid& mmds_surface);

/// Gnuplot-compatible matrix: one row per size, one column per alpha
/// index, NaN for missing cells.
void write_surface_matrix(const std::string& path, const SurfaceGrid& surface);

SweepPlan load_plan(const std::string& path);
void save_plan(const std::string& path, const SweepPlan& plan);

/// Trials in one free-run evaluation drive the reservoir with this many
/// leading test samples before closing the loop.
std::size_t free_run_warmup_length(const SweepPlan& plan);

/// Length of the trailing post-washout window MMDS is measured on.
inline constexpr std::size_t kMmdsWindowLength = 200;

}  // namespace esn

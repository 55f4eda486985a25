#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tensorsandwich/errors.hpp"
#include "tensorsandwich/sandwich.hpp"

namespace ts {

enum class SweepKind { sample, noise, als_compare };

SweepKind sweep_kind_from_string(const std::string& s);
std::string to_string(SweepKind kind);

/// One experiment grid. Budgets are per-slice sampling budgets m; when the
/// explicit list is empty they are derived from budget_fractions as
/// round(frac * n * r * ln^2(n)), the window the sample-complexity study
/// sweeps. Noise and ALS sweeps use the single budget_fraction instead.
struct ExperimentSpec {
    SweepKind kind = SweepKind::sample;
    int n = 50;
    std::vector<int> ranks = {2, 5};
    std::vector<std::int64_t> budgets;
    std::vector<double> budget_fractions;  ///< default: 6 geometric points in [0.035, 0.7]
    double budget_fraction = 0.35;         ///< noise / ALS sweeps
    std::vector<double> snr_db = {10.0, 20.0, 30.0, 40.0,
                                  std::numeric_limits<double>::infinity()};
    int trials = 10;
    std::uint64_t base_seed = 1;
    int s = 2;
    int gamma = 4;
    double delta = 0.1;
    int als_iters = 100;
    int threads = 1;
    std::vector<double> weights;  ///< empty = quadratic 1/i^2

    void validate() const;
};

/// One completed (or failed) trial. Failed trials keep their status and score
/// rel_error = 1 (the zero estimate); they are data, never aborts.
struct TrialRow {
    int rank = 0;
    std::int64_t slice_budget = 0;
    double snr_db = std::numeric_limits<double>::infinity();
    std::string arm;  ///< ALS | TS | TS_ALS (als_compare only)
    int trial = 0;
    std::uint64_t seed = 0;
    std::int64_t omega1 = 0, omega2 = 0, total = 0;
    double fraction = 0.0;
    double rel_error = 1.0;
    RunStatus status = RunStatus::success;
    std::int64_t wall_ms = 0;
};

struct SweepResult {
    SweepKind kind = SweepKind::sample;
    std::vector<TrialRow> rows;  ///< deterministic order: cell-major, then trial
};

/// Seed derivation (frozen scheme, see rng.hpp):
///   trial_seed = derive_seed(base_seed, {rank, budget, trial})
///   data       = derive_seed(trial_seed, {11})
///   pipeline   = derive_seed(trial_seed, {12})
///   noise      = derive_seed(trial_seed, {13, bits(snr_db)})
///   ALS init   = derive_seed(trial_seed, {14})
///   ALS mask   = derive_seed(trial_seed, {15})
/// Cells sharing (rank, budget, trial) therefore reproduce identical data
/// and pipeline randomness regardless of which sweep runs them; an infinite
/// SNR cell is bitwise the same trial as the noiseless sample-sweep cell.
std::uint64_t trial_seed(std::uint64_t base_seed, int rank, std::int64_t budget, int trial);

std::int64_t budget_from_fraction(double fraction, int n, int rank);
std::vector<double> default_budget_fractions();

SweepResult run_sample_sweep(const ExperimentSpec& spec);
SweepResult run_noise_sweep(const ExperimentSpec& spec);
SweepResult run_als_compare(const ExperimentSpec& spec);
SweepResult run_sweep(const ExperimentSpec& spec);

/// CSV schemas (headers are stable; see README):
///   sample: rank,slice_budget,trial,seed,omega1,omega2,total,fraction,rel_error,status,wall_ms
///   noise:  rank,snr_db,slice_budget,... (rest as sample)
///   als:    rank,snr_db,arm,slice_budget,... (rest as sample)
std::string csv_header(SweepKind kind);
std::string to_csv(const SweepResult& result);
void write_csv(const SweepResult& result, const std::string& path);

/// Per-cell median + mean rel_error companion table.
std::string to_summary_csv(const SweepResult& result);
void write_summary_csv(const SweepResult& result, const std::string& path);

double median(std::vector<double> values);

}  // namespace ts

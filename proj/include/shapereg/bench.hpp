#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "shapereg/simgen.hpp"

namespace shapereg {

// One experiment cell: scenario, sample size, the cell's derived seed, the
// estimator tag ("decomp-monotone", "decomp-convex" or "additive") and the
// function-estimation MSE measured on fresh test draws.
struct BenchRecord {
    ScenarioId scenario = ScenarioId::S1;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string method;
    double mse = 0.0;
};

// Log-log OLS slope of mean MSE against n, restricted to n >= n_min.
struct SlopeRow {
    ScenarioId scenario = ScenarioId::S1;
    std::string method;
    double slope = 0.0;
    std::size_t n_min = 0;
};

// Full parameter set of a convergence study, echoed into every report so a
// run can be reproduced from its serialized output alone.
struct BenchConfig {
    ScenarioSpec scenario;            // base spec; n is overridden per cell
    std::vector<std::size_t> n_grid;
    std::size_t reps = 0;
    std::uint64_t base_seed = 0;
    std::size_t n_test = 0;
    std::size_t slope_n_min = 0;      // 0: no slope fitted
};

struct BenchReport {
    std::vector<BenchRecord> records;  // sorted by (scenario, n, seed, method)
    std::vector<SlopeRow> slopes;
    BenchConfig config;
};

// Rows of the fixed-penalty robustness sweep.
struct SweepRow {
    std::size_t n = 0;
    double alpha = 0.0;
    double mean_mse = 0.0;
};

// Rows of the split-robustness study.
struct SplitRow {
    std::uint64_t split_seed = 0;
    double alpha_hat = 0.0;
    double mse = 0.0;
};

// Rows of the segment-count sweep.
struct MSweepRow {
    std::size_t m = 0;
    double mean_mse = 0.0;
};

// Thread count for embarrassingly parallel cells: the SHAPEREG_THREADS
// environment variable when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t default_thread_count();

// Run fn(0..count-1), splitting the index range over `threads` workers.
// Results must be written to disjoint slots; the schedule is deterministic.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

// Deterministic per-cell seed: chained hash of the study seed, the scenario,
// the sample size and the replication index, so any single cell can be rerun
// in isolation.
std::uint64_t cell_seed(std::uint64_t base_seed, ScenarioId id, std::size_t n,
                        std::size_t rep);

// Mean squared difference between predictor and truth over n_test fresh
// Unif[0,1]^d draws (observation noise excluded).  The draws come from a
// dedicated sub-stream of the seed.
double estimate_mse(
    const std::function<double(std::span<const double>)>& predictor,
    const std::function<double(std::span<const double>)>& truth,
    std::size_t d, std::size_t n_test, std::uint64_t seed);

// Estimator tag used in records for the scenario's pipeline.
std::string method_tag(ScenarioId id);

// Empirical reference slopes for each scenario (log-log mean MSE vs n,
// n >= 2000), used to contextualize new runs in reports.
double reference_slope(ScenarioId id);

// One record per (n, rep): generate the scenario's data, run the matching
// selection pipeline (univariate decomposition for S1-S4, additive
// backfitting otherwise, default candidate grid), and measure MSE on fresh
// draws.  Slopes are fitted with n_min = 2000 when the grid reaches at least
// two distinct sizes >= 2000.  Deterministic in all arguments.
BenchReport convergence_study(const ScenarioSpec& base,
                              const std::vector<std::size_t>& n_grid,
                              std::size_t reps, std::uint64_t base_seed,
                              std::size_t n_test = 100000,
                              std::size_t threads = 0);

// Recompute log-log OLS slopes from a report's records: mean MSE per n
// (averaged before logging) for n >= n_min, per (scenario, method) group.
// Throws InsufficientGridError when a group has fewer than two distinct
// sizes >= n_min.
std::vector<SlopeRow> fit_slope(const BenchReport& report, std::size_t n_min);

// Fixed-penalty robustness: no selection step; each candidate alpha is fit
// on the full generated sample and scored against the truth.  Univariate
// scenarios use the matching shape; additive scenarios replicate the scalar
// alpha across coordinates.  Mean MSE over reps per (n, alpha).
std::vector<SweepRow> alpha_sweep(const ScenarioSpec& base,
                                  const std::vector<std::size_t>& n_list,
                                  const std::vector<double>& alpha_list,
                                  std::size_t reps, std::uint64_t seed,
                                  std::size_t n_test = 100000,
                                  std::size_t threads = 0);

// Split robustness: one dataset (spec.seed), many selection splits.  Records
// the selected penalty (first coordinate for additive scenarios) and the
// MSE per split seed.  Requires at least two split seeds; test draws are
// shared across splits so rows differ only through the split.
std::vector<SplitRow> cv_split_robustness(
    const ScenarioSpec& spec, const std::vector<std::uint64_t>& split_seeds,
    std::size_t n_test = 100000, std::size_t threads = 0);

// Segment-count sweep for the staircase (S2) and convex-ramp (S4) families:
// mean MSE of the full selection pipeline at fixed n as m varies.
std::vector<MSweepRow> m_sweep(ScenarioId family,
                               const std::vector<std::size_t>& m_list,
                               std::size_t n, std::size_t reps,
                               std::uint64_t seed,
                               std::size_t n_test = 100000,
                               std::size_t threads = 0);

}  // namespace shapereg

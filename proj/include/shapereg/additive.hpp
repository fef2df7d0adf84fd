#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "shapereg/core.hpp"
#include "shapereg/isotonic.hpp"

namespace shapereg {

// Additive monotone-plus-linear estimator for d covariates:
//   f(x) = intercept + sum_j component_j(x_j) - sum_j alpha_j * x_j
// with every component_j non-decreasing.  Fitted by coordinate-descent
// backfitting over penalty-augmented responses z_i = y_i + alpha' x_i.
struct AdditiveFit {
    std::vector<double> alpha;       // one penalty per coordinate
    std::vector<StepFit> components; // one non-decreasing fit per coordinate
    double intercept = 0.0;
    std::size_t iterations = 0;      // completed full sweeps
    double final_risk = 0.0;         // training risk at the last update
    bool converged = true;           // false: sweep budget hit (warning-grade;
                                     // the fit is still usable)
    // Training risk after initialization and after every single-coordinate
    // update.  Each update is an exact partial minimization, so the trace is
    // non-increasing.
    std::vector<double> risk_trace;
};

// Selection result over a vector-valued candidate grid: winning fit, the
// split that scored it, and the (alpha vector, validation SSE) table.
struct SelectedAdditiveModel {
    AdditiveFit best;
    SplitIndices split;
    std::vector<std::pair<std::vector<double>, double>> table;
    bool refined = false;  // vector grids are never locally refined
};

// Coordinate-descent backfit on the augmented responses.  Components start
// as zero functions with intercept = mean(z); each sweep refits every
// coordinate's component to the current partial residuals and re-centers it
// (weighted mean moved into the intercept).  Stops when the relative risk
// decrease over a full sweep is below tol, or after max_iters sweeps (then
// converged = false).
AdditiveFit backfit(const DataSet& train, const std::vector<double>& alpha,
                    std::size_t max_iters = 100, double tol = 1e-8);

// Prediction rule: intercept + sum of component step evaluations minus the
// linear penalty.
double predict_additive(const AdditiveFit& fit, std::span<const double> x);

// Sum of squared residuals of the fit over a validation set.
double validation_sse(const AdditiveFit& fit, const DataSet& data);

// Split once, backfit every candidate alpha vector on the training part,
// score on the validation part, pick the argmin (ties break toward the
// lexicographically smallest alpha).  Grid dimension must equal data.d().
// validate_size == 0 selects the default round(sqrt(n)).
SelectedAdditiveModel select_alpha_additive(const DataSet& data,
                                            const AlphaGrid& grid,
                                            std::uint64_t seed,
                                            std::size_t validate_size = 0);

}  // namespace shapereg

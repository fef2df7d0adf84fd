#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "shapereg/convexreg.hpp"
#include "shapereg/core.hpp"
#include "shapereg/isotonic.hpp"

namespace shapereg {

// Univariate decomposition estimator: a shape-restricted fit of the
// penalty-augmented responses, predicting g(x) minus the penalty.
//   Monotone: f(x) = g(x) - alpha * x          with g non-decreasing
//   Convex:   f(x) = g(x) - (alpha / 2) * x^2  with g convex
struct DecompFit {
    double alpha = 0.0;
    Shape shape = Shape::Monotone;
    std::variant<StepFit, PiecewiseLinearFit> g;
};

// Selection result: the winning fit, the split that scored it, and the full
// (alpha, validation SSE) table including any refinement evaluations.
struct SelectedModel {
    DecompFit best;
    SplitIndices split;
    std::vector<std::pair<double, double>> table;
    bool refined = false;
};

// Penalty added to responses before the shape-restricted fit, and subtracted
// again at prediction time: alpha*x (Monotone) or (alpha/2)*x^2 (Convex).
double shape_penalty(Shape shape, double alpha, double x);

// Augmented responses z_i = y_i + penalty(alpha, x_i).  Requires d == 1 and
// finite alpha >= 0.
std::vector<double> augment(const DataSet& data, double alpha, Shape shape);

// Shape-restricted least-squares fit of the augmented responses.
DecompFit fit_for_alpha(const DataSet& train, double alpha, Shape shape);

// Prediction rule: shape evaluator minus the penalty.
double predict(const DecompFit& fit, double q);
double predict(const SelectedModel& model, double q);

// Sum of squared residuals of the fit over a validation set.
double validation_sse(const DecompFit& fit, const DataSet& data);

// Split once, fit every candidate alpha on the training part, score on the
// validation part, pick the argmin (ties break toward the smallest alpha).
// With grid.refine, a golden-section search between the argmin's grid
// neighbours (at most 30 extra evaluations, appended to the table) replaces
// the winner only when it strictly lowers the validation SSE.
// validate_size == 0 selects the default round(sqrt(n)).
SelectedModel select_alpha(const DataSet& data, const AlphaGrid& grid,
                           Shape shape, std::uint64_t seed,
                           std::size_t validate_size = 0);

}  // namespace shapereg

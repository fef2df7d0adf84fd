#pragma once

#include <cstddef>
#include <vector>

#include "shapereg/errors.hpp"

namespace shapereg {

// Convex piecewise-linear fit over distinct sorted knots: secant slopes
// between consecutive knots are non-decreasing.  Evaluation interpolates
// linearly inside the knot range and extrapolates linearly outside with the
// boundary secant slopes.
struct PiecewiseLinearFit {
    std::vector<double> knots;
    std::vector<double> values;
};

// Weighted least-squares projection onto the cone of convex sequences:
//   minimize sum_i w_i (y_i - theta_i)^2
//   s.t. secant slopes of theta over `knots` are non-decreasing.
//
// Solved as non-negative least squares in a hinge basis (free affine part
// plus one non-negative hinge per interior knot) with a Lawson-Hanson
// active-set loop.  Inputs are standardized internally for conditioning and
// unscaled on output.  The dual (KKT) residual of the standardized problem
// must fall below `tol` within `max_iters` least-squares solves, else
// SolverNotConvergedError is thrown.  Already-feasible input is returned
// unchanged, which also makes the fit exactly idempotent.
PiecewiseLinearFit fit_convex_lse(const std::vector<double>& knots,
                                  const std::vector<double>& y,
                                  const std::vector<double>& w,
                                  std::size_t max_iters = 10000,
                                  double tol = 1e-8);

// Prediction rule: exact fitted value at a knot, linear interpolation
// between knots, linear extrapolation outside the range using the first /
// last secant slope.  A single-knot fit evaluates as a constant.
double evaluate_pwl(const PiecewiseLinearFit& fit, double q);

}  // namespace shapereg

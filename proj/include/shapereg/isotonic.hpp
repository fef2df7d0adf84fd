#pragma once

#include <cstddef>
#include <vector>

#include "shapereg/errors.hpp"

namespace shapereg {

// Non-decreasing step fit over distinct sorted knots.  `values` are the
// fitted levels and `weights` the total observation weight pooled into each
// knot.  Evaluation interpolates linearly between knots and is constant
// outside their range.
struct StepFit {
    std::vector<double> knots;
    std::vector<double> values;
    std::vector<double> weights;
};

// Sorted distinct design points with weighted-mean responses, produced by
// pooling duplicate x values.
struct CollapsedPoints {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> w;
};

// Sort by x and pool exact duplicates into weighted means.  Duplicate groups
// accumulate in (x, original index) order, so results are reproducible
// bit-for-bit.  Throws NonFiniteInputError / NonPositiveWeightError /
// DimensionMismatchError.
CollapsedPoints collapse_ties(const std::vector<double>& x,
                              const std::vector<double>& y,
                              const std::vector<double>& w);

// Weighted least-squares projection onto the non-decreasing cone via the
// pool-adjacent-violators algorithm.  `knots` must be strictly increasing;
// single pass, O(n) after sorting.
StepFit fit_isotonic(const std::vector<double>& knots,
                     const std::vector<double>& y,
                     const std::vector<double>& w);

// Convenience: collapse ties, then fit.
StepFit fit_isotonic_points(const std::vector<double>& x,
                            const std::vector<double>& y,
                            const std::vector<double>& w);

// Prediction rule: exact fitted value at a knot, linear interpolation
// between adjacent knots, constant extrapolation outside the range.
double evaluate_step(const StepFit& fit, double q);

}  // namespace shapereg

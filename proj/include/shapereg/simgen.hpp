#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "shapereg/core.hpp"

namespace shapereg {

// Synthetic-data scenarios.  S1..S4 are univariate; A1_2d/A2_2d are
// two-dimensional additive and A3_5d/A4_5d five-dimensional additive.
enum class ScenarioId : int {
    S1,
    S2,
    S3,
    S4,
    A1_2d,
    A2_2d,
    A3_5d,
    A4_5d,
};

std::string to_string(ScenarioId id);
ScenarioId scenario_from_string(const std::string& name);

// Covariate dimension implied by the scenario (1, 2 or 5).
std::size_t scenario_dimension(ScenarioId id);

// True regression functions on [0,1].  All throw DomainError outside [0,1].

// Triangle wave with slopes (-3, 3, -3) and breakpoints 1/3, 2/3; 3-Lipschitz.
double f1(double x);

// Non-decreasing m-level staircase plus a linear term: level i on
// [(i-1)/m, i/m) — right-open steps, x = 1 belongs to level m — plus beta*x.
double f2(double x, std::size_t m, double beta);

// Smooth sinusoid sin(gamma*(2x - 1)).
double f3(double x, double gamma);

// Convex piecewise-linear ramp plus a quadratic term: m equal segments with
// slopes (-1, 0, ..., m-2), anchored at 0, plus beta*x^2.
double f4(double x, std::size_t m, double beta);

// Additive truths (A1_2d, A2_2d, A3_5d, A4_5d) evaluated at a point of the
// matching dimension.  Throws DimensionMismatchError on a size mismatch and
// DomainError for non-additive ids.
double additive_truth(ScenarioId id, std::span<const double> x);

// Everything needed to draw one dataset: the scenario, its shape parameters
// (used only where the scenario reads them), noise level, sample size, seed.
struct ScenarioSpec {
    ScenarioId id = ScenarioId::S1;
    std::size_t m = 3;       // steps/segments for S2 and S4
    double beta = 1.0;       // linear/quadratic coefficient for S2 and S4
    double gamma = 4.0;      // frequency for S3
    double noise_sd = 0.1;   // >= 0; 0 is the noiseless special case
    std::size_t n = 0;
    std::uint64_t seed = 0;

    std::size_t dimension() const { return scenario_dimension(id); }

    // Throws DomainError on invalid parameters.
    void validate() const;

    // True regression function at x (dimension must match the scenario).
    double truth(std::span<const double> x) const;
};

// Draw n rows: X ~ Unif[0,1]^d IID, y = truth(X) + noise_sd * N(0,1).
// The covariate and noise streams are derived independently from the seed,
// so changing noise_sd never changes the X draws.  Fully deterministic.
DataSet generate(const ScenarioSpec& spec);

}  // namespace shapereg

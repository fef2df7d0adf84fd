#include "shapereg/simgen.hpp"

#include <cmath>
#include <vector>

#include "shapereg/rng.hpp"

namespace shapereg {

std::string to_string(ScenarioId id) {
    switch (id) {
        case ScenarioId::S1: return "S1";
        case ScenarioId::S2: return "S2";
        case ScenarioId::S3: return "S3";
        case ScenarioId::S4: return "S4";
        case ScenarioId::A1_2d: return "A1_2d";
        case ScenarioId::A2_2d: return "A2_2d";
        case ScenarioId::A3_5d: return "A3_5d";
        case ScenarioId::A4_5d: return "A4_5d";
    }
    throw DomainError("unknown scenario id");
}

ScenarioId scenario_from_string(const std::string& name) {
    if (name == "S1") return ScenarioId::S1;
    if (name == "S2") return ScenarioId::S2;
    if (name == "S3") return ScenarioId::S3;
    if (name == "S4") return ScenarioId::S4;
    if (name == "A1_2d") return ScenarioId::A1_2d;
    if (name == "A2_2d") return ScenarioId::A2_2d;
    if (name == "A3_5d") return ScenarioId::A3_5d;
    if (name == "A4_5d") return ScenarioId::A4_5d;
    throw DomainError("unknown scenario name: " + name);
}

std::size_t scenario_dimension(ScenarioId id) {
    switch (id) {
        case ScenarioId::S1:
        case ScenarioId::S2:
        case ScenarioId::S3:
        case ScenarioId::S4: return 1;
        case ScenarioId::A1_2d:
        case ScenarioId::A2_2d: return 2;
        case ScenarioId::A3_5d:
        case ScenarioId::A4_5d: return 5;
    }
    throw DomainError("unknown scenario id");
}

namespace {

void check_unit_interval(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("argument must lie in [0,1]");
}

// Step index of x among m equal right-open pieces of [0,1]; x = 1 maps to
// the last piece.
std::size_t segment_index(double x, std::size_t m) {
    const auto s = static_cast<std::size_t>(std::floor(x * static_cast<double>(m)));
    return s >= m ? m - 1 : s;
}

}  // namespace

double f1(double x) {
    check_unit_interval(x);
    if (x <= 1.0 / 3.0) return 1.0 - 3.0 * x;
    if (x <= 2.0 / 3.0) return -1.0 + 3.0 * x;
    return 3.0 - 3.0 * x;
}

double f2(double x, std::size_t m, double beta) {
    check_unit_interval(x);
    if (m < 1) throw DomainError("f2 requires m >= 1");
    const double level = static_cast<double>(segment_index(x, m) + 1);
    return level + beta * x;
}

double f3(double x, double gamma) {
    check_unit_interval(x);
    return std::sin(gamma * (2.0 * x - 1.0));
}

double f4(double x, std::size_t m, double beta) {
    check_unit_interval(x);
    if (m < 1) throw DomainError("f4 requires m >= 1");
    const std::size_t s = segment_index(x, m);
    const double sd = static_cast<double>(s);
    const double md = static_cast<double>(m);
    // Value at the segment's left breakpoint: sum of the first s slopes
    // (k - 1 for k = 0..s-1), each over a 1/m-wide piece.
    const double at_break = sd * (sd - 3.0) / (2.0 * md);
    const double ramp = at_break + (sd - 1.0) * (x - sd / md);
    return ramp + beta * x * x;
}

double additive_truth(ScenarioId id, std::span<const double> x) {
    const std::size_t d = scenario_dimension(id);
    if (d == 1) throw DomainError("additive_truth requires an additive id");
    if (x.size() != d)
        throw DimensionMismatchError(
            "point has " + std::to_string(x.size()) +
            " coordinates; scenario " + to_string(id) + " needs " +
            std::to_string(d));
    switch (id) {
        case ScenarioId::A1_2d: return f1(x[0]) - f1(x[1]);
        case ScenarioId::A2_2d:
            return f2(x[0], 3, 1.0) - f2(x[1], 3, 1.0);
        case ScenarioId::A3_5d:
            return f1(x[0]) - f1(x[1]) + x[2] - x[3] + 1.0;
        case ScenarioId::A4_5d:
            return f2(x[0], 1, 0.0) + f2(1.0 - x[1], 3, 3.0) +
                   f2(x[2], 3, 3.0) + f2(1.0 - x[3], 1, 3.0) +
                   f2(x[4], 1, 3.0);
        default: throw DomainError("additive_truth requires an additive id");
    }
}

void ScenarioSpec::validate() const {
    if (n < 1) throw DomainError("scenario needs n >= 1");
    if (m < 1) throw DomainError("scenario needs m >= 1");
    if (!std::isfinite(beta)) throw DomainError("beta must be finite");
    if (!std::isfinite(gamma)) throw DomainError("gamma must be finite");
    if (!std::isfinite(noise_sd) || noise_sd < 0.0)
        throw DomainError("noise_sd must be finite and >= 0");
}

double ScenarioSpec::truth(std::span<const double> x) const {
    switch (id) {
        case ScenarioId::S1:
        case ScenarioId::S2:
        case ScenarioId::S3:
        case ScenarioId::S4: {
            if (x.size() != 1)
                throw DimensionMismatchError(
                    "univariate scenario evaluated at a " +
                    std::to_string(x.size()) + "-dimensional point");
            switch (id) {
                case ScenarioId::S1: return f1(x[0]);
                case ScenarioId::S2: return f2(x[0], m, beta);
                case ScenarioId::S3: return f3(x[0], gamma);
                default: return f4(x[0], m, beta);
            }
        }
        default: return additive_truth(id, x);
    }
}

DataSet generate(const ScenarioSpec& spec) {
    spec.validate();
    const std::size_t d = spec.dimension();
    // Independent sub-streams: covariates never depend on how much noise is
    // drawn, so noise_sd = 0 reproduces the same design exactly.
    Rng xs(mix_seed(spec.seed, 0));
    Rng noise(mix_seed(spec.seed, 1));
    std::vector<double> x(spec.n * d), y(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i)
        for (std::size_t j = 0; j < d; ++j) x[i * d + j] = xs.uniform01();
    for (std::size_t i = 0; i < spec.n; ++i) {
        const std::span<const double> row{x.data() + i * d, d};
        y[i] = spec.truth(row) + spec.noise_sd * noise.normal();
    }
    return DataSet(std::move(x), std::move(y), d);
}

}  // namespace shapereg

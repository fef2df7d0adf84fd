#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "shapereg/rng.hpp"
#include "shapereg/simgen.hpp"

using namespace shapereg;

TEST_CASE("scenario ids round-trip through their names") {
    for (auto id : {ScenarioId::S1, ScenarioId::S2, ScenarioId::S3,
                    ScenarioId::S4, ScenarioId::A1_2d, ScenarioId::A2_2d,
                    ScenarioId::A3_5d, ScenarioId::A4_5d})
        CHECK(scenario_from_string(to_string(id)) == id);
    CHECK_THROWS_AS(scenario_from_string("S9"), DomainError);
    CHECK(scenario_dimension(ScenarioId::S3) == 1);
    CHECK(scenario_dimension(ScenarioId::A2_2d) == 2);
    CHECK(scenario_dimension(ScenarioId::A4_5d) == 5);
}

TEST_CASE("f1 is the triangle wave") {
    CHECK(f1(0.0) == 1.0);
    CHECK(std::abs(f1(1.0 / 3.0)) < 1e-15);
    CHECK(f1(0.5) == doctest::Approx(0.5));
    CHECK(f1(2.0 / 3.0) == doctest::Approx(1.0));
    CHECK(f1(1.0) == 0.0);
    CHECK_THROWS_AS(f1(-0.01), DomainError);
    CHECK_THROWS_AS(f1(1.01), DomainError);
}

TEST_CASE("f1 is 3-Lipschitz on random pairs") {
    Rng rng(1);
    for (int t = 0; t < 500; ++t) {
        const double a = rng.uniform01(), b = rng.uniform01();
        CHECK(std::abs(f1(a) - f1(b)) <= 3.0 * std::abs(a - b) + 1e-12);
    }
}

TEST_CASE("f2 is the staircase plus a linear term") {
    CHECK(f2(0.5, 3, 1.0) == 2.5);  // middle step level 2, plus 0.5
    CHECK(f2(0.0, 7, 0.0) == 1.0);
    CHECK(f2(1.0, 3, 0.0) == 3.0);  // x = 1 belongs to the last step
    CHECK(f2(0.999, 3, 0.0) == 3.0);
    CHECK(f2(0.2, 1, 2.0) == doctest::Approx(1.4));
    CHECK_THROWS_AS(f2(0.5, 0, 1.0), DomainError);
    CHECK_THROWS_AS(f2(-0.1, 3, 1.0), DomainError);
}

TEST_CASE("f2 minus its linear part is non-decreasing with exactly m levels") {
    for (std::size_t m : {1u, 2u, 3u, 5u}) {
        std::set<double> levels;
        double prev = -1.0;
        for (int i = 0; i <= 1000; ++i) {
            const double x = i / 1000.0;
            // Subtracting the linear part leaves the staircase up to fp dust.
            const double step = f2(x, m, 4.0) - 4.0 * x;
            CHECK(step >= prev - 1e-12);
            prev = step;
            // The staircase itself (beta = 0) is exact.
            levels.insert(f2(x, m, 0.0));
        }
        CHECK(levels.size() == m);
        CHECK(*levels.begin() == 1.0);
        CHECK(*levels.rbegin() == static_cast<double>(m));
    }
}

TEST_CASE("f3 is the sinusoid") {
    CHECK(f3(0.5, 4.0) == 0.0);
    CHECK(f3(1.0, 4.0) == doctest::Approx(std::sin(4.0)));
    CHECK(f3(0.0, 4.0) == doctest::Approx(-std::sin(4.0)));
    CHECK_THROWS_AS(f3(1.5, 4.0), DomainError);
}

TEST_CASE("f4 is the convex ramp plus a quadratic term") {
    CHECK(f4(1.0 / 3.0, 3, 0.0) == doctest::Approx(-1.0 / 3.0));
    CHECK(f4(1.0, 3, 1.0) == doctest::Approx(1.0));
    CHECK(f4(0.0, 3, 5.0) == 0.0);
    CHECK(f4(0.0, 9, 2.0) == 0.0);
    // Slope -1 everywhere when m = 1.
    CHECK(f4(0.75, 1, 0.0) == doctest::Approx(-0.75));
    CHECK_THROWS_AS(f4(0.5, 0, 1.0), DomainError);
    CHECK_THROWS_AS(f4(2.0, 3, 1.0), DomainError);
}

TEST_CASE("f4's piecewise-linear part is midpoint-convex on random triples") {
    Rng rng(2);
    for (std::size_t m : {1u, 3u, 5u}) {
        for (int t = 0; t < 300; ++t) {
            const double a = rng.uniform01(), b = rng.uniform01();
            const double mid = 0.5 * (a + b);
            const double ca = f4(a, m, 0.0), cb = f4(b, m, 0.0);
            CHECK(f4(mid, m, 0.0) <= 0.5 * (ca + cb) + 1e-12);
        }
    }
}

TEST_CASE("additive truths compose the printed formulas") {
    const double origin2[] = {0.0, 0.0};
    CHECK(additive_truth(ScenarioId::A1_2d, origin2) == 0.0);
    const double half2[] = {0.5, 0.5};
    CHECK(additive_truth(ScenarioId::A2_2d, half2) == 0.0);
    const double p5[] = {0.0, 0.0, 1.0, 0.0, 0.42};
    CHECK(additive_truth(ScenarioId::A3_5d, p5) == 2.0);
    // A4_5d at the origin: f2(0;1,0) + f2(1;3,3) + f2(0;3,3) + f2(1;1,3)
    //                      + f2(0;1,3) = 1 + 6 + 1 + 4 + 1 = 13.
    const double z5[] = {0.0, 0.0, 0.0, 0.0, 0.0};
    CHECK(additive_truth(ScenarioId::A4_5d, z5) == 13.0);

    CHECK_THROWS_AS(additive_truth(ScenarioId::A1_2d, p5),
                    DimensionMismatchError);
    CHECK_THROWS_AS(additive_truth(ScenarioId::S1, half2), DomainError);
}

TEST_CASE("ScenarioSpec validates its parameters") {
    ScenarioSpec spec;
    spec.n = 10;
    CHECK_NOTHROW(spec.validate());
    ScenarioSpec bad = spec;
    bad.n = 0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = spec;
    bad.m = 0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = spec;
    bad.noise_sd = -0.1;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = spec;
    bad.noise_sd = 0.0;
    CHECK_NOTHROW(bad.validate());  // noiseless special case is allowed
}

TEST_CASE("ScenarioSpec::truth dispatches by id") {
    ScenarioSpec spec;
    spec.n = 1;
    const double q[] = {0.5};
    spec.id = ScenarioId::S1;
    CHECK(spec.truth(q) == doctest::Approx(0.5));
    spec.id = ScenarioId::S2;
    CHECK(spec.truth(q) == 2.5);  // m=3, beta=1 defaults
    spec.id = ScenarioId::S3;
    CHECK(spec.truth(q) == 0.0);
    spec.id = ScenarioId::S4;
    spec.m = 3;
    spec.beta = 1.0;
    CHECK(spec.truth(q) ==
          doctest::Approx(f4(0.5, 3, 1.0)));
    const double q2[] = {0.25, 0.75};
    spec.id = ScenarioId::A1_2d;
    CHECK(spec.truth(q2) == doctest::Approx(f1(0.25) - f1(0.75)));
    CHECK_THROWS_AS(spec.truth(q), DimensionMismatchError);
}

TEST_CASE("generate is deterministic and respects the scenario dimension") {
    ScenarioSpec spec;
    spec.id = ScenarioId::A3_5d;
    spec.n = 200;
    spec.seed = 31;
    const DataSet a = generate(spec);
    const DataSet b = generate(spec);
    CHECK(a.n() == 200);
    CHECK(a.d() == 5);
    CHECK(a.xs() == b.xs());
    CHECK(a.ys() == b.ys());

    ScenarioSpec other = spec;
    other.seed = 32;
    const DataSet c = generate(other);
    CHECK(a.xs() != c.xs());
}

TEST_CASE("generate with noise_sd = 0 returns the truth exactly") {
    ScenarioSpec spec;
    spec.id = ScenarioId::S4;
    spec.n = 100;
    spec.seed = 5;
    spec.noise_sd = 0.0;
    const DataSet data = generate(spec);
    for (std::size_t i = 0; i < data.n(); ++i)
        CHECK(data.y(i) == f4(data.x(i, 0), 3, 1.0));
}

TEST_CASE("generate's covariate stream is independent of the noise level") {
    ScenarioSpec spec;
    spec.id = ScenarioId::S1;
    spec.n = 500;
    spec.seed = 77;
    ScenarioSpec quiet = spec;
    quiet.noise_sd = 0.0;
    const DataSet noisy = generate(spec);
    const DataSet clean = generate(quiet);
    CHECK(noisy.xs() == clean.xs());
    // Noise really was added on top of the same truth values.
    double max_dev = 0.0;
    for (std::size_t i = 0; i < spec.n; ++i)
        max_dev = std::max(max_dev, std::abs(noisy.y(i) - clean.y(i)));
    CHECK(max_dev > 0.0);
    CHECK(max_dev < 1.0);  // 0.1-sd Gaussian stays well below 10 sigma
}

TEST_CASE("generate draws uniform covariates") {
    ScenarioSpec spec;
    spec.id = ScenarioId::S1;
    spec.n = 10000;
    spec.seed = 4;
    const DataSet data = generate(spec);
    double mean = 0.0, lo = 1.0, hi = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
        mean += data.x(i, 0);
        lo = std::min(lo, data.x(i, 0));
        hi = std::max(hi, data.x(i, 0));
    }
    mean /= static_cast<double>(data.n());
    CHECK(mean > 0.48);
    CHECK(mean < 0.52);
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0);
}

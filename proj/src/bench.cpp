#include "shapereg/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <numeric>
#include <thread>
#include <tuple>

#include "shapereg/additive.hpp"
#include "shapereg/decomp.hpp"
#include "shapereg/rng.hpp"

namespace shapereg {

namespace {

Shape shape_for(ScenarioId id) {
    return (id == ScenarioId::S3 || id == ScenarioId::S4) ? Shape::Convex
                                                          : Shape::Monotone;
}

// Wraps the truth function of a spec for MSE estimation.
std::function<double(std::span<const double>)> truth_fn(ScenarioSpec spec) {
    return [spec](std::span<const double> x) { return spec.truth(x); };
}

void check_sorted_grid(const std::vector<std::size_t>& n_grid) {
    if (n_grid.empty()) throw DomainError("sample-size grid must be non-empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 1) throw DomainError("sample sizes must be >= 1");
        if (i > 0 && n_grid[i] <= n_grid[i - 1])
            throw DomainError(
                "sample-size grid must be strictly ascending");
    }
}

}  // namespace

std::size_t default_thread_count() {
    if (const char* env = std::getenv("SHAPEREG_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = default_thread_count();
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

std::uint64_t cell_seed(std::uint64_t base_seed, ScenarioId id, std::size_t n,
                        std::size_t rep) {
    std::uint64_t s = mix_seed(base_seed, static_cast<std::uint64_t>(id));
    s = mix_seed(s, static_cast<std::uint64_t>(n));
    return mix_seed(s, static_cast<std::uint64_t>(rep));
}

double estimate_mse(
    const std::function<double(std::span<const double>)>& predictor,
    const std::function<double(std::span<const double>)>& truth,
    std::size_t d, std::size_t n_test, std::uint64_t seed) {
    if (d < 1) throw DomainError("estimate_mse needs d >= 1");
    if (n_test < 1) throw DomainError("estimate_mse needs n_test >= 1");
    // Sub-stream tag 2: distinct from the generator's covariate (0) and
    // noise (1) streams, so test draws never alias training data.
    Rng rng(mix_seed(seed, 2));
    std::vector<double> x(d);
    double sum = 0.0;
    for (std::size_t i = 0; i < n_test; ++i) {
        for (std::size_t j = 0; j < d; ++j) x[j] = rng.uniform01();
        const double r = predictor(x) - truth(x);
        sum += r * r;
    }
    return sum / static_cast<double>(n_test);
}

std::string method_tag(ScenarioId id) {
    if (scenario_dimension(id) > 1) return "additive";
    return shape_for(id) == Shape::Monotone ? "decomp-monotone"
                                            : "decomp-convex";
}

double reference_slope(ScenarioId id) {
    switch (id) {
        case ScenarioId::S1: return -0.738;
        case ScenarioId::S2: return -1.201;
        case ScenarioId::S3: return -0.799;
        case ScenarioId::S4: return -0.895;
        case ScenarioId::A1_2d: return -0.717;
        case ScenarioId::A2_2d: return -0.885;
        case ScenarioId::A3_5d: return -0.828;
        case ScenarioId::A4_5d: return -0.814;
    }
    throw DomainError("unknown scenario id");
}

namespace {

// Fit the scenario's selection pipeline on the data and return a predictor.
// Univariate scenarios run the decomposition selector over the default
// candidate grid without local refinement: with a small validation set the
// refinement step chases validation noise below the minimal shape-compatible
// penalty, trading a variance saving for an approximation bias that does not
// shrink with the sample size, which distorts the convergence measurements
// these studies exist to make.
std::function<double(std::span<const double>)> fit_pipeline(
    const ScenarioSpec& spec, const DataSet& data, std::uint64_t seed) {
    if (spec.dimension() == 1) {
        auto model = std::make_shared<SelectedModel>(
            select_alpha(data, AlphaGrid::default_grid(), shape_for(spec.id), seed));
        return [model](std::span<const double> x) {
            return predict(*model, x[0]);
        };
    }
    auto model = std::make_shared<SelectedAdditiveModel>(select_alpha_additive(
        data, AlphaGrid::default_grid(spec.dimension()), seed));
    return [model](std::span<const double> x) {
        return predict_additive(model->best, x);
    };
}

}  // namespace

BenchReport convergence_study(const ScenarioSpec& base,
                              const std::vector<std::size_t>& n_grid,
                              std::size_t reps, std::uint64_t base_seed,
                              std::size_t n_test, std::size_t threads) {
    check_sorted_grid(n_grid);
    if (reps < 1) throw DomainError("reps must be >= 1");

    BenchReport report;
    report.config.scenario = base;
    report.config.n_grid = n_grid;
    report.config.reps = reps;
    report.config.base_seed = base_seed;
    report.config.n_test = n_test;

    const std::size_t cells = n_grid.size() * reps;
    report.records.resize(cells);
    const auto truth = truth_fn(base);
    parallel_for(cells, threads, [&](std::size_t c) {
        const std::size_t n = n_grid[c / reps];
        const std::size_t rep = c % reps;
        const std::uint64_t seed = cell_seed(base_seed, base.id, n, rep);
        ScenarioSpec spec = base;
        spec.n = n;
        spec.seed = seed;
        const DataSet data = generate(spec);
        const auto predictor = fit_pipeline(spec, data, mix_seed(seed, 3));
        BenchRecord& rec = report.records[c];
        rec.scenario = base.id;
        rec.n = n;
        rec.seed = seed;
        rec.method = method_tag(base.id);
        rec.mse = estimate_mse(predictor, truth, spec.dimension(), n_test,
                               seed);
    });

    std::sort(report.records.begin(), report.records.end(),
              [](const BenchRecord& a, const BenchRecord& b) {
                  return std::tie(a.scenario, a.n, a.seed, a.method) <
                         std::tie(b.scenario, b.n, b.seed, b.method);
              });

    constexpr std::size_t kSlopeNMin = 2000;
    std::size_t large = 0;
    for (std::size_t n : n_grid)
        if (n >= kSlopeNMin) ++large;
    if (large >= 2) {
        report.config.slope_n_min = kSlopeNMin;
        report.slopes = fit_slope(report, kSlopeNMin);
    }
    return report;
}

std::vector<SlopeRow> fit_slope(const BenchReport& report, std::size_t n_min) {
    // (scenario, method) -> n -> (sum of MSE, count).
    std::map<std::pair<ScenarioId, std::string>,
             std::map<std::size_t, std::pair<double, std::size_t>>>
        groups;
    for (const BenchRecord& rec : report.records) {
        auto& cell = groups[{rec.scenario, rec.method}][rec.n];
        cell.first += rec.mse;
        cell.second += 1;
    }
    std::vector<SlopeRow> rows;
    for (const auto& [key, by_n] : groups) {
        std::vector<double> lx, ly;
        for (const auto& [n, cell] : by_n) {
            if (n < n_min) continue;
            lx.push_back(std::log(static_cast<double>(n)));
            ly.push_back(std::log(cell.first /
                                  static_cast<double>(cell.second)));
        }
        if (lx.size() < 2)
            throw InsufficientGridError(
                "need at least 2 distinct sample sizes >= " +
                std::to_string(n_min) + " to fit a slope, got " +
                std::to_string(lx.size()));
        const double mx =
            std::accumulate(lx.begin(), lx.end(), 0.0) /
            static_cast<double>(lx.size());
        const double my =
            std::accumulate(ly.begin(), ly.end(), 0.0) /
            static_cast<double>(ly.size());
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxy += (lx[i] - mx) * (ly[i] - my);
            sxx += (lx[i] - mx) * (lx[i] - mx);
        }
        rows.push_back({key.first, key.second, sxy / sxx, n_min});
    }
    return rows;
}

std::vector<SweepRow> alpha_sweep(const ScenarioSpec& base,
                                  const std::vector<std::size_t>& n_list,
                                  const std::vector<double>& alpha_list,
                                  std::size_t reps, std::uint64_t seed,
                                  std::size_t n_test, std::size_t threads) {
    if (n_list.empty()) throw DomainError("n_list must be non-empty");
    if (alpha_list.empty()) throw DomainError("alpha_list must be non-empty");
    for (double a : alpha_list)
        if (!std::isfinite(a) || a < 0.0)
            throw DomainError("alpha values must be finite and >= 0");
    if (reps < 1) throw DomainError("reps must be >= 1");

    const std::size_t d = base.dimension();
    const auto truth = truth_fn(base);
    const std::size_t cells = n_list.size() * reps;
    // mse_sums[n index][alpha index], filled by disjoint cell writers.
    std::vector<std::vector<double>> cell_mse(
        cells, std::vector<double>(alpha_list.size(), 0.0));
    parallel_for(cells, threads, [&](std::size_t c) {
        const std::size_t n = n_list[c / reps];
        const std::size_t rep = c % reps;
        const std::uint64_t cseed = cell_seed(seed, base.id, n, rep);
        ScenarioSpec spec = base;
        spec.n = n;
        spec.seed = cseed;
        const DataSet data = generate(spec);
        for (std::size_t a = 0; a < alpha_list.size(); ++a) {
            std::function<double(std::span<const double>)> predictor;
            if (d == 1) {
                auto fit = std::make_shared<DecompFit>(fit_for_alpha(
                    data, alpha_list[a], shape_for(base.id)));
                predictor = [fit](std::span<const double> x) {
                    return predict(*fit, x[0]);
                };
            } else {
                auto fit = std::make_shared<AdditiveFit>(backfit(
                    data, std::vector<double>(d, alpha_list[a])));
                predictor = [fit](std::span<const double> x) {
                    return predict_additive(*fit, x);
                };
            }
            cell_mse[c][a] = estimate_mse(predictor, truth, d, n_test, cseed);
        }
    });

    std::vector<SweepRow> rows;
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
        for (std::size_t a = 0; a < alpha_list.size(); ++a) {
            double sum = 0.0;
            for (std::size_t rep = 0; rep < reps; ++rep)
                sum += cell_mse[ni * reps + rep][a];
            rows.push_back({n_list[ni], alpha_list[a],
                            sum / static_cast<double>(reps)});
        }
    }
    return rows;
}

std::vector<SplitRow> cv_split_robustness(
    const ScenarioSpec& spec, const std::vector<std::uint64_t>& split_seeds,
    std::size_t n_test, std::size_t threads) {
    if (split_seeds.size() < 2)
        throw InsufficientSplitsError(split_seeds.size());
    const DataSet data = generate(spec);
    const auto truth = truth_fn(spec);
    const std::size_t d = spec.dimension();

    std::vector<SplitRow> rows(split_seeds.size());
    parallel_for(split_seeds.size(), threads, [&](std::size_t i) {
        const std::uint64_t split_seed = split_seeds[i];
        SplitRow& row = rows[i];
        row.split_seed = split_seed;
        std::function<double(std::span<const double>)> predictor;
        if (d == 1) {
            auto model = std::make_shared<SelectedModel>(select_alpha(
                data, AlphaGrid::default_grid(), shape_for(spec.id), split_seed));
            row.alpha_hat = model->best.alpha;
            predictor = [model](std::span<const double> x) {
                return predict(*model, x[0]);
            };
        } else {
            auto model =
                std::make_shared<SelectedAdditiveModel>(select_alpha_additive(
                    data, AlphaGrid::default_grid(d), split_seed));
            row.alpha_hat = model->best.alpha[0];
            predictor = [model](std::span<const double> x) {
                return predict_additive(model->best, x);
            };
        }
        // Shared test draws: rows differ only through the split.
        row.mse = estimate_mse(predictor, truth, d, n_test, spec.seed);
    });
    return rows;
}

std::vector<MSweepRow> m_sweep(ScenarioId family,
                               const std::vector<std::size_t>& m_list,
                               std::size_t n, std::size_t reps,
                               std::uint64_t seed, std::size_t n_test,
                               std::size_t threads) {
    if (family != ScenarioId::S2 && family != ScenarioId::S4)
        throw DomainError(
            "m_sweep applies to the S2 and S4 scenario families");
    if (m_list.empty()) throw DomainError("m_list must be non-empty");
    for (std::size_t m : m_list)
        if (m < 1) throw DomainError("m values must be >= 1");
    if (reps < 1) throw DomainError("reps must be >= 1");

    const std::size_t cells = m_list.size() * reps;
    std::vector<double> cell_mse(cells, 0.0);
    parallel_for(cells, threads, [&](std::size_t c) {
        const std::size_t m = m_list[c / reps];
        const std::size_t rep = c % reps;
        ScenarioSpec spec;
        spec.id = family;
        spec.m = m;
        spec.beta = 1.0;
        spec.n = n;
        // Fold m into the seed chain ahead of (n, rep).
        spec.seed = cell_seed(mix_seed(seed, m), family, n, rep);
        const DataSet data = generate(spec);
        const auto predictor =
            fit_pipeline(spec, data, mix_seed(spec.seed, 3));
        cell_mse[c] =
            estimate_mse(predictor, truth_fn(spec), 1, n_test, spec.seed);
    });

    std::vector<MSweepRow> rows;
    for (std::size_t mi = 0; mi < m_list.size(); ++mi) {
        double sum = 0.0;
        for (std::size_t rep = 0; rep < reps; ++rep)
            sum += cell_mse[mi * reps + rep];
        rows.push_back({m_list[mi], sum / static_cast<double>(reps)});
    }
    return rows;
}

}  // namespace shapereg

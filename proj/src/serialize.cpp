#include "shapereg/serialize.hpp"

#include <cstdio>
#include <fstream>

namespace shapereg {

using nlohmann::json;

void to_json(json& j, const StepFit& fit) {
    j = json{{"knots", fit.knots},
             {"values", fit.values},
             {"weights", fit.weights}};
}

void from_json(const json& j, StepFit& fit) {
    j.at("knots").get_to(fit.knots);
    j.at("values").get_to(fit.values);
    j.at("weights").get_to(fit.weights);
}

void to_json(json& j, const PiecewiseLinearFit& fit) {
    j = json{{"knots", fit.knots}, {"values", fit.values}};
}

void from_json(const json& j, PiecewiseLinearFit& fit) {
    j.at("knots").get_to(fit.knots);
    j.at("values").get_to(fit.values);
}

void to_json(json& j, const SplitIndices& split) {
    j = json{{"n", split.train.size() + split.validate.size()},
             {"validate_size", split.validate.size()},
             {"seed", split.seed}};
}

void from_json(const json& j, SplitIndices& split) {
    const auto n = j.at("n").get<std::size_t>();
    const auto vsize = j.at("validate_size").get<std::size_t>();
    const auto seed = j.at("seed").get<std::uint64_t>();
    split = shapereg::split(n, vsize, seed);
}

void to_json(json& j, const AlphaGrid& grid) {
    j = json{{"values", grid.values}, {"refine", grid.refine}};
}

void from_json(const json& j, AlphaGrid& grid) {
    j.at("values").get_to(grid.values);
    j.at("refine").get_to(grid.refine);
}

void to_json(json& j, const DecompFit& fit) {
    j = json{{"alpha", fit.alpha}, {"shape", to_string(fit.shape)}};
    if (fit.shape == Shape::Monotone)
        j["g"] = std::get<StepFit>(fit.g);
    else
        j["g"] = std::get<PiecewiseLinearFit>(fit.g);
}

void from_json(const json& j, DecompFit& fit) {
    j.at("alpha").get_to(fit.alpha);
    fit.shape = shape_from_string(j.at("shape").get<std::string>());
    if (fit.shape == Shape::Monotone)
        fit.g = j.at("g").get<StepFit>();
    else
        fit.g = j.at("g").get<PiecewiseLinearFit>();
}

void to_json(json& j, const SelectedModel& model) {
    j = json{{"best", model.best},
             {"split", model.split},
             {"table", model.table},
             {"refined", model.refined}};
}

void from_json(const json& j, SelectedModel& model) {
    j.at("best").get_to(model.best);
    j.at("split").get_to(model.split);
    j.at("table").get_to(model.table);
    j.at("refined").get_to(model.refined);
}

void to_json(json& j, const AdditiveFit& fit) {
    j = json{{"alpha", fit.alpha},
             {"components", fit.components},
             {"intercept", fit.intercept},
             {"iterations", fit.iterations},
             {"final_risk", fit.final_risk},
             {"converged", fit.converged},
             {"risk_trace", fit.risk_trace}};
}

void from_json(const json& j, AdditiveFit& fit) {
    j.at("alpha").get_to(fit.alpha);
    j.at("components").get_to(fit.components);
    j.at("intercept").get_to(fit.intercept);
    j.at("iterations").get_to(fit.iterations);
    j.at("final_risk").get_to(fit.final_risk);
    j.at("converged").get_to(fit.converged);
    j.at("risk_trace").get_to(fit.risk_trace);
}

void to_json(json& j, const SelectedAdditiveModel& model) {
    j = json{{"best", model.best},
             {"split", model.split},
             {"table", model.table},
             {"refined", model.refined}};
}

void from_json(const json& j, SelectedAdditiveModel& model) {
    j.at("best").get_to(model.best);
    j.at("split").get_to(model.split);
    j.at("table").get_to(model.table);
    j.at("refined").get_to(model.refined);
}

void to_json(json& j, const ScenarioSpec& spec) {
    j = json{{"id", to_string(spec.id)}, {"m", spec.m},
             {"beta", spec.beta},       {"gamma", spec.gamma},
             {"noise_sd", spec.noise_sd}, {"n", spec.n},
             {"seed", spec.seed}};
}

void from_json(const json& j, ScenarioSpec& spec) {
    spec.id = scenario_from_string(j.at("id").get<std::string>());
    j.at("m").get_to(spec.m);
    j.at("beta").get_to(spec.beta);
    j.at("gamma").get_to(spec.gamma);
    j.at("noise_sd").get_to(spec.noise_sd);
    j.at("n").get_to(spec.n);
    j.at("seed").get_to(spec.seed);
}

void to_json(json& j, const BenchRecord& rec) {
    j = json{{"scenario", to_string(rec.scenario)},
             {"n", rec.n},
             {"seed", rec.seed},
             {"method", rec.method},
             {"mse", rec.mse}};
}

void from_json(const json& j, BenchRecord& rec) {
    rec.scenario = scenario_from_string(j.at("scenario").get<std::string>());
    j.at("n").get_to(rec.n);
    j.at("seed").get_to(rec.seed);
    j.at("method").get_to(rec.method);
    j.at("mse").get_to(rec.mse);
}

void to_json(json& j, const SlopeRow& row) {
    j = json{{"scenario", to_string(row.scenario)},
             {"method", row.method},
             {"slope", row.slope},
             {"n_min", row.n_min}};
}

void from_json(const json& j, SlopeRow& row) {
    row.scenario = scenario_from_string(j.at("scenario").get<std::string>());
    j.at("method").get_to(row.method);
    j.at("slope").get_to(row.slope);
    j.at("n_min").get_to(row.n_min);
}

void to_json(json& j, const BenchConfig& config) {
    j = json{{"scenario", config.scenario},
             {"n_grid", config.n_grid},
             {"reps", config.reps},
             {"base_seed", config.base_seed},
             {"n_test", config.n_test},
             {"slope_n_min", config.slope_n_min}};
}

void from_json(const json& j, BenchConfig& config) {
    j.at("scenario").get_to(config.scenario);
    j.at("n_grid").get_to(config.n_grid);
    j.at("reps").get_to(config.reps);
    j.at("base_seed").get_to(config.base_seed);
    j.at("n_test").get_to(config.n_test);
    j.at("slope_n_min").get_to(config.slope_n_min);
}

void to_json(json& j, const BenchReport& report) {
    j = json{{"records", report.records},
             {"slopes", report.slopes},
             {"config", report.config}};
}

void from_json(const json& j, BenchReport& report) {
    j.at("records").get_to(report.records);
    j.at("slopes").get_to(report.slopes);
    j.at("config").get_to(report.config);
}

void to_json(json& j, const SweepRow& row) {
    j = json{{"n", row.n}, {"alpha", row.alpha}, {"mean_mse", row.mean_mse}};
}

void from_json(const json& j, SweepRow& row) {
    j.at("n").get_to(row.n);
    j.at("alpha").get_to(row.alpha);
    j.at("mean_mse").get_to(row.mean_mse);
}

void to_json(json& j, const SplitRow& row) {
    j = json{{"split_seed", row.split_seed},
             {"alpha_hat", row.alpha_hat},
             {"mse", row.mse}};
}

void from_json(const json& j, SplitRow& row) {
    j.at("split_seed").get_to(row.split_seed);
    j.at("alpha_hat").get_to(row.alpha_hat);
    j.at("mse").get_to(row.mse);
}

void to_json(json& j, const MSweepRow& row) {
    j = json{{"m", row.m}, {"mean_mse", row.mean_mse}};
}

void from_json(const json& j, MSweepRow& row) {
    j.at("m").get_to(row.m);
    j.at("mean_mse").get_to(row.mean_mse);
}

void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write to " + path);
    out << j.dump(2) << '\n';
    if (!out) throw Error("failed writing " + path);
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw EmptyFileError(path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DomainError("invalid JSON in " + path + ": " + e.what());
    }
}

void save_records_csv(const std::string& path,
                      const std::vector<BenchRecord>& records) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write to " + path);
    out << "scenario,n,seed,method,mse\n";
    char buf[64];
    for (const BenchRecord& rec : records) {
        std::snprintf(buf, sizeof(buf), "%.17g", rec.mse);
        out << to_string(rec.scenario) << ',' << rec.n << ',' << rec.seed
            << ',' << rec.method << ',' << buf << '\n';
    }
    if (!out) throw Error("failed writing " + path);
}

}  // namespace shapereg

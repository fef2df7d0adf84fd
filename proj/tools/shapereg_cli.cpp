// Command-line interface for the shape-restricted regression toolkit.
//
// Subcommands:
//   simulate   draw a synthetic dataset from a named scenario
//   fit        penalized shape-restricted selection on a CSV dataset
//   predict    evaluate a saved model on new covariates
//   bench      benchmark suites: convergence, alpha, cv, msweep
//
// Every run writes its fully resolved configuration (defaults included)
// into its JSON output, so any artifact can be reproduced from itself.
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <shapereg/additive.hpp>
#include <shapereg/bench.hpp>
#include <shapereg/core.hpp>
#include <shapereg/decomp.hpp>
#include <shapereg/errors.hpp>
#include <shapereg/rng.hpp>
#include <shapereg/serialize.hpp>
#include <shapereg/simgen.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

// Usage mistakes that only surface after flag parsing (bad --grid grammar,
// flags that contradict the loaded data, ...).  Reported with the offending
// flag's name and mapped to exit code 2 like any parse-time error.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& token, const std::string& flag) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (token.empty() || end != begin + token.size())
        throw UsageError(flag + ": '" + token + "' is not a number");
    return v;
}

std::size_t parse_size(const std::string& token, const std::string& flag) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const unsigned long long v = std::strtoull(begin, &end, 10);
    if (token.empty() || end != begin + token.size() || token.front() == '-')
        throw UsageError(flag + ": '" + token + "' is not a non-negative integer");
    return static_cast<std::size_t>(v);
}

std::vector<double> parse_double_list(const std::string& csv,
                                      const std::string& flag) {
    std::vector<double> out;
    for (const std::string& token : split_on(csv, ','))
        out.push_back(parse_double(token, flag));
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& csv,
                                         const std::string& flag) {
    std::vector<std::size_t> out;
    for (const std::string& token : split_on(csv, ','))
        out.push_back(parse_size(token, flag));
    return out;
}

// Penalty-grid grammar: "log:<lo>:<hi>:<count>" for a log-spaced grid or
// "list:v1,v2,..." for explicit values.  0 is appended unless no_zero is
// set (or already present in an explicit list).
shapereg::AlphaGrid parse_grid(const std::string& spec, bool no_zero,
                               std::size_t d) {
    try {
        if (spec.rfind("log:", 0) == 0) {
            const auto parts = split_on(spec.substr(4), ':');
            if (parts.size() != 3)
                throw UsageError("--grid: expected log:<lo>:<hi>:<count>, got '" +
                                 spec + "'");
            return shapereg::AlphaGrid::log_spaced(
                parse_double(parts[0], "--grid"), parse_double(parts[1], "--grid"),
                parse_size(parts[2], "--grid"), !no_zero, d);
        }
        if (spec.rfind("list:", 0) == 0) {
            std::vector<double> values = parse_double_list(spec.substr(5), "--grid");
            bool has_zero = false;
            for (double v : values) has_zero = has_zero || v == 0.0;
            if (!no_zero && !has_zero) values.push_back(0.0);
            return shapereg::AlphaGrid::from_scalars(values, d);
        }
        throw UsageError(
            "--grid: expected log:<lo>:<hi>:<count> or list:v1,v2,..., got '" +
            spec + "'");
    } catch (const shapereg::Error& e) {
        throw UsageError(std::string("--grid: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOpts {
    std::string scenario;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::size_t m = 3;
    double beta = 1.0;
    double gamma = 4.0;
    double noise_sd = 0.1;
    std::string out;
};

int run_simulate(const SimulateOpts& o) {
    shapereg::ScenarioSpec spec;
    spec.id = shapereg::scenario_from_string(o.scenario);
    spec.m = o.m;
    spec.beta = o.beta;
    spec.gamma = o.gamma;
    spec.noise_sd = o.noise_sd;
    spec.n = o.n;
    spec.seed = o.seed;
    spec.validate();

    const shapereg::DataSet data = shapereg::generate(spec);
    shapereg::save_csv(o.out, data);

    const json echo = {{"command", "simulate"}, {"scenario", spec}, {"out", o.out}};
    shapereg::save_json(o.out + ".spec.json", echo);

    std::cout << "wrote " << data.n() << " rows (" << data.d()
              << " covariate" << (data.d() == 1 ? "" : "s") << ") to " << o.out
              << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// fit

struct FitOpts {
    std::string data;
    std::string response = "y";
    std::string shape = "monotone";
    std::string grid = "log:1e-2:1e2:16";
    bool no_zero = false;
    bool refine = false;
    std::uint64_t seed = 0;
    std::size_t validate_size = 0;
    std::string out;
};

int run_fit(const FitOpts& o) {
    const shapereg::DataSet data = shapereg::load_csv(o.data, o.response);
    const std::size_t d = data.d();
    const shapereg::Shape shape = shapereg::shape_from_string(o.shape);
    shapereg::AlphaGrid grid = parse_grid(o.grid, o.no_zero, d);
    grid.refine = o.refine;
    const std::size_t resolved_validate =
        o.validate_size != 0 ? o.validate_size
                             : shapereg::default_validate_size(data.n());

    json out;
    out["command"] = "fit";
    out["config"] = {{"command", "fit"},
                     {"data", o.data},
                     {"response", o.response},
                     {"shape", o.shape},
                     {"grid_spec", o.grid},
                     {"no_zero", o.no_zero},
                     {"refine", o.refine},
                     {"grid", grid},
                     {"seed", o.seed},
                     {"validate_size", resolved_validate},
                     {"out", o.out}};

    if (d == 1) {
        const shapereg::SelectedModel model =
            shapereg::select_alpha(data, grid, shape, o.seed, o.validate_size);
        out["kind"] = "decomp";
        out["model"] = model;
        shapereg::save_json(o.out, out);
        std::cout << "selected alpha " << fmt(model.best.alpha) << " ("
                  << model.table.size() << " candidates"
                  << (model.refined ? ", refined" : "") << "); wrote " << o.out
                  << "\n";
    } else {
        if (shape != shapereg::Shape::Monotone)
            throw UsageError("--shape: '" + o.shape +
                             "' applies to univariate data only; " +
                             std::to_string(d) +
                             "-column covariates use monotone additive components");
        const shapereg::SelectedAdditiveModel model =
            shapereg::select_alpha_additive(data, grid, o.seed, o.validate_size);
        out["kind"] = "additive";
        out["model"] = model;
        shapereg::save_json(o.out, out);
        std::cout << "selected alpha (";
        for (std::size_t j = 0; j < model.best.alpha.size(); ++j)
            std::cout << (j ? ", " : "") << fmt(model.best.alpha[j]);
        std::cout << ") over " << model.table.size() << " candidates; wrote "
                  << o.out << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// predict

struct PredictOpts {
    std::string model;
    std::string data;
    std::string out;
};

// Covariate rows read from a CSV by header name (x1..xd); other columns,
// e.g. a response, are ignored.
struct FeatureTable {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> rows;  // row-major n x d
};

FeatureTable load_features(const std::string& path, std::size_t d) {
    std::ifstream in(path);
    if (!in) throw shapereg::Error("cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw shapereg::EmptyFileError(path);
    if (!header.empty() && header.back() == '\r') header.pop_back();

    std::vector<std::string> names = split_on(header, ',');
    for (auto& name : names) {
        while (!name.empty() && (name.back() == ' ' || name.back() == '\r'))
            name.pop_back();
        while (!name.empty() && name.front() == ' ') name.erase(name.begin());
    }

    std::vector<std::size_t> cols(d);
    for (std::size_t j = 0; j < d; ++j) {
        const std::string want = "x" + std::to_string(j + 1);
        bool found = false;
        for (std::size_t k = 0; k < names.size(); ++k) {
            if (names[k] == want) {
                cols[j] = k;
                found = true;
                break;
            }
        }
        if (!found) throw shapereg::MissingColumnError(path, want);
    }

    FeatureTable table;
    table.d = d;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        const std::vector<std::string> cells = split_on(line, ',');
        for (std::size_t j = 0; j < d; ++j) {
            if (cols[j] >= cells.size())
                throw shapereg::NonNumericCellError(row, "x" + std::to_string(j + 1),
                                                    "missing cell");
            const std::string& cell = cells[cols[j]];
            const char* begin = cell.c_str();
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (cell.empty() || end != begin + cell.size() || !std::isfinite(v))
                throw shapereg::NonNumericCellError(row, "x" + std::to_string(j + 1),
                                                    "'" + cell + "'");
            table.rows.push_back(v);
        }
    }
    table.n = row;
    return table;
}

int run_predict(const PredictOpts& o) {
    const json mj = shapereg::load_json(o.model);
    if (!mj.contains("kind") || !mj.contains("model"))
        throw shapereg::DomainError("not a fitted-model file: " + o.model);
    const std::string kind = mj.at("kind").get<std::string>();

    shapereg::SelectedModel decomp_model;
    shapereg::SelectedAdditiveModel additive_model;
    std::size_t d = 0;
    if (kind == "decomp") {
        decomp_model = mj.at("model").get<shapereg::SelectedModel>();
        d = 1;
    } else if (kind == "additive") {
        additive_model = mj.at("model").get<shapereg::SelectedAdditiveModel>();
        d = additive_model.best.alpha.size();
    } else {
        throw shapereg::DomainError("unknown model kind '" + kind + "' in " +
                                    o.model);
    }

    const FeatureTable table = load_features(o.data, d);

    std::ofstream pred(o.out);
    if (!pred) throw shapereg::Error("cannot open " + o.out);
    for (std::size_t j = 0; j < d; ++j) pred << "x" << (j + 1) << ",";
    pred << "prediction\n";
    for (std::size_t i = 0; i < table.n; ++i) {
        const std::span<const double> x(table.rows.data() + i * d, d);
        const double yhat = kind == "decomp"
                                ? shapereg::predict(decomp_model, x[0])
                                : shapereg::predict_additive(additive_model.best, x);
        for (double v : x) pred << fmt(v) << ",";
        pred << fmt(yhat) << "\n";
    }
    pred.flush();
    if (!pred) throw shapereg::Error("failed writing " + o.out);

    const json echo = {{"command", "predict"}, {"model", o.model},
                       {"data", o.data},       {"out", o.out},
                       {"kind", kind},         {"dimension", d},
                       {"rows", table.n}};
    shapereg::save_json(o.out + ".config.json", echo);

    std::cout << "wrote " << table.n << " predictions to " << o.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOpts {
    std::string suite;
    std::string scenario;
    std::string out;
    std::string csv_out;  // empty: derived from out
    std::string n_grid = "250,500,1000,2000,4000,8000";
    std::string alphas = "0.1,3,4,6,8,12";
    std::size_t n = 0;  // 0: suite default (cv 500, msweep 5000)
    std::size_t splits = 300;
    std::string m_list = "1,2,3,4,5";
    std::size_t reps = 50;
    std::uint64_t seed = 0;
    std::size_t n_test = 100000;
    std::size_t threads = 0;  // 0: default_thread_count()
    std::size_t m = 3;
    double beta = 1.0;
    double gamma = 4.0;
    double noise_sd = 0.1;
};

std::string derive_csv_path(const std::string& out) {
    const std::string suffix = ".json";
    if (out.size() > suffix.size() &&
        out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0)
        return out.substr(0, out.size() - suffix.size()) + ".csv";
    return out + ".csv";
}

void write_rows_csv(const std::string& path, const std::string& header,
                    const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw shapereg::Error("cannot open " + path);
    out << header << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << row[i];
        out << "\n";
    }
    out.flush();
    if (!out) throw shapereg::Error("failed writing " + path);
}

int run_bench(const BenchOpts& o) {
    shapereg::ScenarioSpec base;
    base.id = shapereg::scenario_from_string(o.scenario);
    base.m = o.m;
    base.beta = o.beta;
    base.gamma = o.gamma;
    base.noise_sd = o.noise_sd;

    const std::size_t threads =
        o.threads != 0 ? o.threads : shapereg::default_thread_count();
    const std::string csv_out =
        o.csv_out.empty() ? derive_csv_path(o.out) : o.csv_out;

    json config = {{"command", "bench"},
                   {"suite", o.suite},
                   {"scenario", base},
                   {"reps", o.reps},
                   {"seed", o.seed},
                   {"n_test", o.n_test},
                   {"threads", threads},
                   {"out", o.out},
                   {"csv_out", csv_out}};

    json out;
    out["command"] = "bench";
    out["suite"] = o.suite;

    if (o.suite == "convergence") {
        const auto n_grid = parse_size_list(o.n_grid, "--n-grid");
        config["n_grid"] = n_grid;
        const shapereg::BenchReport report = shapereg::convergence_study(
            base, n_grid, o.reps, o.seed, o.n_test, threads);
        out["report"] = report;
        out["reference_slope"] = shapereg::reference_slope(base.id);
        out["config"] = config;
        shapereg::save_json(o.out, out);
        shapereg::save_records_csv(csv_out, report.records);
        std::cout << report.records.size() << " records";
        for (const auto& s : report.slopes)
            std::cout << "; slope(" << shapereg::to_string(s.scenario) << "/"
                      << s.method << ") = " << fmt(s.slope);
        std::cout << "; wrote " << o.out << " and " << csv_out << "\n";
        return 0;
    }

    if (o.suite == "alpha") {
        const auto n_list = parse_size_list(o.n_grid, "--n-grid");
        const auto alphas = parse_double_list(o.alphas, "--alphas");
        config["n_grid"] = n_list;
        config["alphas"] = alphas;
        const std::vector<shapereg::SweepRow> rows = shapereg::alpha_sweep(
            base, n_list, alphas, o.reps, o.seed, o.n_test, threads);
        out["rows"] = rows;
        out["config"] = config;
        shapereg::save_json(o.out, out);
        std::vector<std::vector<std::string>> cells;
        for (const auto& r : rows)
            cells.push_back({std::to_string(r.n), fmt(r.alpha), fmt(r.mean_mse)});
        write_rows_csv(csv_out, "n,alpha,mean_mse", cells);
        std::cout << rows.size() << " sweep rows; wrote " << o.out << " and "
                  << csv_out << "\n";
        return 0;
    }

    if (o.suite == "cv") {
        if (o.splits < 2)
            throw UsageError("--splits: need at least 2 split seeds, got " +
                             std::to_string(o.splits));
        base.n = o.n != 0 ? o.n : 500;
        base.seed = o.seed;
        config["n"] = base.n;
        config["splits"] = o.splits;
        std::vector<std::uint64_t> split_seeds(o.splits);
        for (std::size_t i = 0; i < o.splits; ++i)
            split_seeds[i] = shapereg::mix_seed(o.seed, i);
        const std::vector<shapereg::SplitRow> rows =
            shapereg::cv_split_robustness(base, split_seeds, o.n_test, threads);
        out["rows"] = rows;
        out["config"] = config;
        shapereg::save_json(o.out, out);
        std::vector<std::vector<std::string>> cells;
        for (const auto& r : rows)
            cells.push_back(
                {std::to_string(r.split_seed), fmt(r.alpha_hat), fmt(r.mse)});
        write_rows_csv(csv_out, "split_seed,alpha_hat,mse", cells);
        std::cout << rows.size() << " split rows; wrote " << o.out << " and "
                  << csv_out << "\n";
        return 0;
    }

    if (o.suite == "msweep") {
        if (base.id != shapereg::ScenarioId::S2 &&
            base.id != shapereg::ScenarioId::S4)
            throw UsageError(
                "--scenario: the msweep suite applies to the staircase (S2) and "
                "convex-ramp (S4) families only");
        const auto m_list = parse_size_list(o.m_list, "--m-list");
        const std::size_t n = o.n != 0 ? o.n : 5000;
        config["m_list"] = m_list;
        config["n"] = n;
        const std::vector<shapereg::MSweepRow> rows = shapereg::m_sweep(
            base.id, m_list, n, o.reps, o.seed, o.n_test, threads);
        out["rows"] = rows;
        out["config"] = config;
        shapereg::save_json(o.out, out);
        std::vector<std::vector<std::string>> cells;
        for (const auto& r : rows)
            cells.push_back({std::to_string(r.m), fmt(r.mean_mse)});
        write_rows_csv(csv_out, "m,mean_mse", cells);
        std::cout << rows.size() << " m-sweep rows; wrote " << o.out << " and "
                  << csv_out << "\n";
        return 0;
    }

    throw UsageError("--suite: expected convergence, alpha, cv or msweep, got '" +
                     o.suite + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "shapereg: monotone- and convex-restricted regression with penalized "
        "decompositions, additive backfitting, a scenario simulator and a "
        "benchmark harness"};
    app.require_subcommand(1);

    const std::vector<std::string> scenario_names = {
        "S1", "S2", "S3", "S4", "A1_2d", "A2_2d", "A3_5d", "A4_5d"};

    SimulateOpts sim;
    CLI::App* sim_cmd =
        app.add_subcommand("simulate", "draw a synthetic dataset from a scenario");
    sim_cmd->add_option("--scenario", sim.scenario, "scenario name")
        ->required()
        ->check(CLI::IsMember(scenario_names));
    sim_cmd->add_option("--n", sim.n, "sample size")
        ->required()
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--seed", sim.seed, "random seed (default 0)");
    sim_cmd->add_option("--m", sim.m, "segments for staircase/ramp families")
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--beta", sim.beta, "linear/quadratic trend coefficient");
    sim_cmd->add_option("--gamma", sim.gamma, "sinusoid frequency");
    sim_cmd->add_option("--noise-sd", sim.noise_sd, "noise standard deviation")
        ->check(CLI::NonNegativeNumber);
    sim_cmd->add_option("--out", sim.out, "output CSV path")->required();

    FitOpts fit;
    CLI::App* fit_cmd = app.add_subcommand(
        "fit", "select a penalty and fit a shape-restricted model");
    fit_cmd->add_option("--data", fit.data, "input CSV path")->required();
    fit_cmd->add_option("--response", fit.response,
                        "response column name (default y)");
    fit_cmd->add_option("--shape", fit.shape,
                        "univariate shape: monotone or convex")
        ->check(CLI::IsMember({"monotone", "convex"}));
    fit_cmd->add_option("--grid", fit.grid,
                        "penalty grid: log:<lo>:<hi>:<count> or list:v1,v2,...");
    fit_cmd->add_flag("--no-zero", fit.no_zero,
                      "do not append the unpenalized candidate 0");
    fit_cmd->add_flag("--refine", fit.refine,
                      "golden-section refinement around the grid argmin");
    fit_cmd->add_option("--seed", fit.seed, "selection split seed (default 0)");
    fit_cmd->add_option("--validate-size", fit.validate_size,
                        "held-out rows for selection (default sqrt(n))");
    fit_cmd->add_option("--out", fit.out, "output model JSON path")->required();

    PredictOpts pred;
    CLI::App* pred_cmd =
        app.add_subcommand("predict", "evaluate a saved model on new covariates");
    pred_cmd->add_option("--model", pred.model, "model JSON from fit")->required();
    pred_cmd->add_option("--data", pred.data, "CSV with columns x1..xd")
        ->required();
    pred_cmd->add_option("--out", pred.out, "output predictions CSV")->required();

    BenchOpts bench;
    CLI::App* bench_cmd =
        app.add_subcommand("bench", "run a benchmark suite and write a report");
    bench_cmd->add_option("--suite", bench.suite, "suite name")
        ->required()
        ->check(CLI::IsMember({"convergence", "alpha", "cv", "msweep"}));
    bench_cmd->add_option("--scenario", bench.scenario, "scenario name")
        ->required()
        ->check(CLI::IsMember(scenario_names));
    bench_cmd->add_option("--n-grid", bench.n_grid,
                          "comma-separated sample sizes (convergence, alpha)");
    bench_cmd->add_option("--alphas", bench.alphas,
                          "comma-separated penalties (alpha suite)");
    bench_cmd->add_option("--n", bench.n,
                          "sample size (cv: default 500, msweep: default 5000)");
    bench_cmd->add_option("--splits", bench.splits,
                          "number of selection splits (cv suite)");
    bench_cmd->add_option("--m-list", bench.m_list,
                          "comma-separated segment counts (msweep suite)");
    bench_cmd->add_option("--reps", bench.reps, "replications per cell");
    bench_cmd->add_option("--seed", bench.seed, "study seed (default 0)");
    bench_cmd->add_option("--n-test", bench.n_test,
                          "fresh draws for the MSE estimate")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--threads", bench.threads,
                          "worker threads (default SHAPEREG_THREADS or hardware)");
    bench_cmd->add_option("--m", bench.m, "segments for staircase/ramp families")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--beta", bench.beta,
                          "linear/quadratic trend coefficient");
    bench_cmd->add_option("--gamma", bench.gamma, "sinusoid frequency");
    bench_cmd->add_option("--noise-sd", bench.noise_sd,
                          "noise standard deviation")
        ->check(CLI::NonNegativeNumber);
    bench_cmd->add_option("--out", bench.out, "output report JSON path")
        ->required();
    bench_cmd->add_option("--csv-out", bench.csv_out,
                          "rows CSV path (default: out with .csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim_cmd->parsed()) return run_simulate(sim);
        if (fit_cmd->parsed()) return run_fit(fit);
        if (pred_cmd->parsed()) return run_predict(pred);
        if (bench_cmd->parsed()) return run_bench(bench);
        std::cerr << "error: no subcommand given\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

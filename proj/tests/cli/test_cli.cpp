// End-to-end tests of the command-line tool: each case invokes the built
// executable (path injected at compile time) as a subprocess and checks the
// artifacts it writes, its exit codes and its reproducibility guarantees.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <shapereg/additive.hpp>
#include <shapereg/core.hpp>
#include <shapereg/decomp.hpp>
#include <shapereg/serialize.hpp>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot read " << p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
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

struct TempDir {
    fs::path path;
    TempDir() {
        std::string tmpl =
            (fs::temp_directory_path() / "shapereg_cli_XXXXXX").string();
        std::vector<char> buf(tmpl.begin(), tmpl.end());
        buf.push_back('\0');
        REQUIRE(mkdtemp(buf.data()) != nullptr);
        path = buf.data();
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const TempDir& dir, const std::string& args) {
    const fs::path out_file = dir.path / "_stdout.txt";
    const fs::path err_file = dir.path / "_stderr.txt";
    const std::string cmd = std::string(SHAPEREG_CLI_PATH) + " " + args + " >" +
                            out_file.string() + " 2>" + err_file.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_file(out_file);
    r.err = read_file(err_file);
    return r;
}

json parse_json_file(const fs::path& p) { return json::parse(read_file(p)); }

std::string file_arg(const TempDir& dir, const std::string& name) {
    return (dir.path / name).string();
}

}  // namespace

TEST_CASE("simulate writes a deterministic csv with a spec sidecar") {
    TempDir dir;
    const std::string data = file_arg(dir, "data.csv");

    const RunResult r =
        run_cli(dir, "simulate --scenario S1 --n 200 --seed 7 --out " + data);
    CHECK(r.code == 0);
    CHECK(contains(r.out, "200 rows"));

    const std::string bytes = read_file(data);
    CHECK(count_lines(bytes) == 201);
    CHECK(bytes.rfind("x1,y\n", 0) == 0);

    const json side = parse_json_file(data + ".spec.json");
    CHECK(side.at("command") == "simulate");
    CHECK(side.at("out") == data);
    CHECK(side.at("scenario").at("id") == "S1");
    CHECK(side.at("scenario").at("n") == 200);
    CHECK(side.at("scenario").at("seed") == 7);
    CHECK(side.at("scenario").at("noise_sd") == 0.1);  // default echoed

    SUBCASE("rerunning the same command is byte-identical") {
        const RunResult again =
            run_cli(dir, "simulate --scenario S1 --n 200 --seed 7 --out " + data);
        CHECK(again.code == 0);
        CHECK(read_file(data) == bytes);
    }

    SUBCASE("a different seed changes the data") {
        const std::string other = file_arg(dir, "data8.csv");
        REQUIRE(run_cli(dir, "simulate --scenario S1 --n 200 --seed 8 --out " +
                                 other)
                    .code == 0);
        CHECK(read_file(other) != bytes);
    }

    SUBCASE("the sidecar is a complete recipe for the dataset") {
        const json& sc = side.at("scenario");
        const std::string echo_out = file_arg(dir, "data_echo.csv");
        const std::string cmd =
            "simulate --scenario " + sc.at("id").get<std::string>() +  //
            " --n " + sc.at("n").dump() + " --seed " + sc.at("seed").dump() +
            " --m " + sc.at("m").dump() + " --beta " + sc.at("beta").dump() +
            " --gamma " + sc.at("gamma").dump() + " --noise-sd " +
            sc.at("noise_sd").dump() + " --out " + echo_out;
        REQUIRE(run_cli(dir, cmd).code == 0);
        CHECK(read_file(echo_out) == bytes);
    }

    SUBCASE("multivariate scenarios write one column per covariate") {
        const std::string multi = file_arg(dir, "multi.csv");
        REQUIRE(run_cli(dir, "simulate --scenario A1_2d --n 50 --seed 1 --out " +
                                 multi)
                    .code == 0);
        CHECK(read_file(multi).rfind("x1,x2,y\n", 0) == 0);
    }
}

TEST_CASE("fit on univariate data: selection, config echo, reproducibility") {
    TempDir dir;
    const std::string data = file_arg(dir, "data.csv");
    const std::string model = file_arg(dir, "model.json");
    REQUIRE(run_cli(dir, "simulate --scenario S1 --n 300 --seed 3 --out " + data)
                .code == 0);

    const RunResult r = run_cli(dir, "fit --data " + data +
                                         " --shape monotone --grid list:0.5,2 "
                                         "--seed 5 --out " +
                                         model);
    CHECK(r.code == 0);
    CHECK(contains(r.out, "selected alpha"));

    const json j = parse_json_file(model);
    CHECK(j.at("kind") == "decomp");
    const json& cfg = j.at("config");
    CHECK(cfg.at("response") == "y");
    CHECK(cfg.at("shape") == "monotone");
    CHECK(cfg.at("grid_spec") == "list:0.5,2");
    CHECK(cfg.at("no_zero") == false);
    CHECK(cfg.at("refine") == false);
    CHECK(cfg.at("seed") == 5);
    CHECK(cfg.at("validate_size") == shapereg::default_validate_size(300));
    CHECK(cfg.at("grid").at("values").size() == 3);  // 0 appended

    const json& table = j.at("model").at("table");
    CHECK(table.size() == 3);
    const double alpha_hat = j.at("model").at("best").at("alpha").get<double>();
    CHECK((alpha_hat == 0.0 || alpha_hat == 0.5 || alpha_hat == 2.0));

    SUBCASE("rerunning the same command is byte-identical") {
        const std::string bytes = read_file(model);
        REQUIRE(run_cli(dir, "fit --data " + data +
                                 " --shape monotone --grid list:0.5,2 "
                                 "--seed 5 --out " +
                                 model)
                    .code == 0);
        CHECK(read_file(model) == bytes);
    }

    SUBCASE("the config echo is a complete recipe for the model") {
        const std::string model2 = file_arg(dir, "model2.json");
        std::string cmd = "fit --data " + cfg.at("data").get<std::string>() +
                          " --response " + cfg.at("response").get<std::string>() +
                          " --shape " + cfg.at("shape").get<std::string>() +
                          " --grid " + cfg.at("grid_spec").get<std::string>();
        if (cfg.at("no_zero").get<bool>()) cmd += " --no-zero";
        if (cfg.at("refine").get<bool>()) cmd += " --refine";
        cmd += " --seed " + cfg.at("seed").dump() + " --validate-size " +
               cfg.at("validate_size").dump() + " --out " + model2;
        REQUIRE(run_cli(dir, cmd).code == 0);
        const json j2 = parse_json_file(model2);
        CHECK(j2.at("model").dump() == j.at("model").dump());
        CHECK(j2.at("kind") == j.at("kind"));
    }

    SUBCASE("--no-zero suppresses the unpenalized candidate") {
        const std::string model3 = file_arg(dir, "model3.json");
        REQUIRE(run_cli(dir, "fit --data " + data +
                                 " --grid list:0.5,2 --no-zero --out " + model3)
                    .code == 0);
        const json j3 = parse_json_file(model3);
        CHECK(j3.at("config").at("grid").at("values").size() == 2);
        CHECK(j3.at("model").at("table").size() == 2);
    }

    SUBCASE("--refine is accepted and echoed") {
        const std::string model4 = file_arg(dir, "model4.json");
        REQUIRE(run_cli(dir, "fit --data " + data +
                                 " --grid log:1e-1:1e1:4 --refine --out " +
                                 model4)
                    .code == 0);
        const json j4 = parse_json_file(model4);
        CHECK(j4.at("config").at("refine") == true);
        CHECK(j4.at("model").at("table").size() >= 5);
        CHECK(j4.at("model").at("refined").is_boolean());
    }
}

TEST_CASE("fit routes multivariate data to monotone additive components") {
    TempDir dir;
    const std::string data = file_arg(dir, "data.csv");
    const std::string model = file_arg(dir, "model.json");
    REQUIRE(
        run_cli(dir, "simulate --scenario A1_2d --n 150 --seed 1 --out " + data)
            .code == 0);

    const RunResult r = run_cli(
        dir, "fit --data " + data + " --grid list:1,4 --seed 2 --out " + model);
    CHECK(r.code == 0);

    const json j = parse_json_file(model);
    CHECK(j.at("kind") == "additive");
    CHECK(j.at("model").at("best").at("alpha").size() == 2);
    CHECK(j.at("config").at("grid").at("values").at(0).size() == 2);

    SUBCASE("convex shape on multivariate data is a usage error") {
        const RunResult bad =
            run_cli(dir, "fit --data " + data + " --shape convex --out " +
                             file_arg(dir, "bad.json"));
        CHECK(bad.code == 2);
        CHECK(contains(bad.err, "--shape"));
    }
}

TEST_CASE("predict reproduces the saved model's predictions exactly") {
    TempDir dir;
    const std::string data = file_arg(dir, "data.csv");
    const std::string model = file_arg(dir, "model.json");
    const std::string pred = file_arg(dir, "pred.csv");
    REQUIRE(run_cli(dir, "simulate --scenario S1 --n 300 --seed 3 --out " + data)
                .code == 0);
    REQUIRE(run_cli(dir, "fit --data " + data + " --grid list:0.5,2 --out " +
                             model)
                .code == 0);

    const RunResult r = run_cli(
        dir, "predict --model " + model + " --data " + data + " --out " + pred);
    CHECK(r.code == 0);

    const std::string bytes = read_file(pred);
    const std::vector<std::string> lines = split_on(bytes, '\n');
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] == "x1,prediction");
    CHECK(count_lines(bytes) == 301);

    const json mj = parse_json_file(model);
    const shapereg::SelectedModel loaded =
        mj.at("model").get<shapereg::SelectedModel>();
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::vector<std::string> cells = split_on(lines[i], ',');
        REQUIRE(cells.size() == 2);
        const double x = std::strtod(cells[0].c_str(), nullptr);
        const double p = std::strtod(cells[1].c_str(), nullptr);
        CHECK(shapereg::predict(loaded, x) == p);
    }

    const json side = parse_json_file(pred + ".config.json");
    CHECK(side.at("command") == "predict");
    CHECK(side.at("kind") == "decomp");
    CHECK(side.at("dimension") == 1);
    CHECK(side.at("rows") == 300);

    SUBCASE("additive models round-trip through predict the same way") {
        const std::string data2 = file_arg(dir, "data2.csv");
        const std::string model2 = file_arg(dir, "model2.json");
        const std::string pred2 = file_arg(dir, "pred2.csv");
        REQUIRE(run_cli(dir, "simulate --scenario A1_2d --n 120 --seed 4 --out " +
                                 data2)
                    .code == 0);
        REQUIRE(run_cli(dir, "fit --data " + data2 + " --grid list:1 --out " +
                                 model2)
                    .code == 0);
        REQUIRE(run_cli(dir, "predict --model " + model2 + " --data " + data2 +
                                 " --out " + pred2)
                    .code == 0);

        const json mj2 = parse_json_file(model2);
        const shapereg::SelectedAdditiveModel loaded2 =
            mj2.at("model").get<shapereg::SelectedAdditiveModel>();
        const std::vector<std::string> lines2 =
            split_on(read_file(pred2), '\n');
        REQUIRE(lines2.size() >= 2);
        CHECK(lines2[0] == "x1,x2,prediction");
        std::size_t checked = 0;
        for (std::size_t i = 1; i < lines2.size(); ++i) {
            if (lines2[i].empty()) continue;
            const std::vector<std::string> cells = split_on(lines2[i], ',');
            REQUIRE(cells.size() == 3);
            const double x[2] = {std::strtod(cells[0].c_str(), nullptr),
                                 std::strtod(cells[1].c_str(), nullptr)};
            const double p = std::strtod(cells[2].c_str(), nullptr);
            CHECK(shapereg::predict_additive(loaded2.best, x) == p);
            ++checked;
        }
        CHECK(checked == 120);
    }

    SUBCASE("covariate columns are found by name, response optional") {
        const std::string nox = file_arg(dir, "nox.csv");
        std::ofstream f(nox);
        f << "a,b\n0.5,0.25\n";
        f.close();
        const RunResult bad = run_cli(dir, "predict --model " + model +
                                               " --data " + nox + " --out " +
                                               file_arg(dir, "nope.csv"));
        CHECK(bad.code == 1);
        CHECK(contains(bad.err, "x1"));
    }
}

TEST_CASE("usage errors exit with code 2 and name the offending flag") {
    TempDir dir;
    const std::string data = file_arg(dir, "data.csv");
    REQUIRE(run_cli(dir, "simulate --scenario S1 --n 50 --seed 1 --out " + data)
                .code == 0);

    SUBCASE("unknown flag") {
        const RunResult r = run_cli(dir, "fit --data " + data + " --out " +
                                             file_arg(dir, "m.json") +
                                             " --bogus 3");
        CHECK(r.code == 2);
        CHECK(contains(r.err, "--bogus"));
    }
    SUBCASE("missing required flag") {
        const RunResult r = run_cli(dir, "simulate --n 10 --out " +
                                             file_arg(dir, "x.csv"));
        CHECK(r.code == 2);
        CHECK(contains(r.err, "--scenario"));
    }
    SUBCASE("malformed grid") {
        const RunResult r =
            run_cli(dir, "fit --data " + data + " --grid log:abc --out " +
                             file_arg(dir, "m.json"));
        CHECK(r.code == 2);
        CHECK(contains(r.err, "--grid"));
    }
    SUBCASE("unknown scenario") {
        const RunResult r = run_cli(
            dir, "simulate --scenario Z9 --n 10 --out " + file_arg(dir, "x.csv"));
        CHECK(r.code == 2);
        CHECK(contains(r.err, "--scenario"));
    }
    SUBCASE("unknown bench suite") {
        const RunResult r =
            run_cli(dir, "bench --suite nope --scenario S1 --out " +
                             file_arg(dir, "r.json"));
        CHECK(r.code == 2);
        CHECK(contains(r.err, "--suite"));
    }
    SUBCASE("msweep outside the staircase/ramp families") {
        const RunResult r = run_cli(
            dir,
            "bench --suite msweep --scenario S1 --reps 1 --n-test 100 --out " +
                file_arg(dir, "r.json"));
        CHECK(r.code == 2);
        CHECK(contains(r.err, "--scenario"));
    }
    SUBCASE("cv with fewer than two splits") {
        const RunResult r = run_cli(
            dir,
            "bench --suite cv --scenario S1 --splits 1 --n 60 --n-test 100 "
            "--out " +
                file_arg(dir, "r.json"));
        CHECK(r.code == 2);
        CHECK(contains(r.err, "--splits"));
    }
    SUBCASE("no subcommand") {
        CHECK(run_cli(dir, "").code == 2);
    }
}

TEST_CASE("runtime errors exit with code 1 and surface module messages") {
    TempDir dir;

    SUBCASE("missing data file") {
        const RunResult r =
            run_cli(dir, "fit --data " + file_arg(dir, "absent.csv") +
                             " --out " + file_arg(dir, "m.json"));
        CHECK(r.code == 1);
        CHECK(contains(r.err, "absent.csv"));
    }
    SUBCASE("missing model file") {
        const std::string data = file_arg(dir, "data.csv");
        REQUIRE(
            run_cli(dir, "simulate --scenario S1 --n 30 --seed 1 --out " + data)
                .code == 0);
        const RunResult r =
            run_cli(dir, "predict --model " + file_arg(dir, "absent.json") +
                             " --data " + data + " --out " +
                             file_arg(dir, "p.csv"));
        CHECK(r.code == 1);
        CHECK(contains(r.err, "absent.json"));
    }
    SUBCASE("non-numeric response cell") {
        const std::string bad = file_arg(dir, "bad.csv");
        std::ofstream f(bad);
        f << "x1,y\n0.5,abc\n";
        f.close();
        const RunResult r = run_cli(dir, "fit --data " + bad + " --out " +
                                             file_arg(dir, "m.json"));
        CHECK(r.code == 1);
        CHECK(contains(r.err, "non-numeric"));
    }
    SUBCASE("malformed model json") {
        const std::string broken = file_arg(dir, "broken.json");
        std::ofstream f(broken);
        f << "{]";
        f.close();
        const std::string data = file_arg(dir, "data.csv");
        REQUIRE(
            run_cli(dir, "simulate --scenario S1 --n 30 --seed 1 --out " + data)
                .code == 0);
        const RunResult r =
            run_cli(dir, "predict --model " + broken + " --data " + data +
                             " --out " + file_arg(dir, "p.csv"));
        CHECK(r.code == 1);
    }
}

TEST_CASE("bench convergence writes a report json plus a records csv") {
    TempDir dir;
    const std::string report = file_arg(dir, "report.json");
    const std::string cmd =
        "bench --suite convergence --scenario S1 --n-grid 120,240 --reps 2 "
        "--n-test 2000 --seed 11 --out " +
        report;
    const RunResult r = run_cli(dir, cmd);
    CHECK(r.code == 0);
    CHECK(contains(r.out, "4 records"));

    const json j = parse_json_file(report);
    CHECK(j.at("command") == "bench");
    CHECK(j.at("suite") == "convergence");
    CHECK(j.at("config").at("n_grid") == json({120, 240}));
    CHECK(j.at("config").at("threads").get<std::size_t>() >= 1);
    CHECK(j.at("reference_slope").get<double>() < -0.5);
    CHECK(j.at("report").at("records").size() == 4);
    CHECK(j.at("report").at("slopes").empty());  // all sizes below 2000
    CHECK(j.at("report").at("config").at("base_seed") == 11);

    const std::string csv = read_file(file_arg(dir, "report.csv"));
    CHECK(csv.rfind("scenario,n,seed,method,mse\n", 0) == 0);
    CHECK(count_lines(csv) == 5);

    SUBCASE("rerun is byte-identical, also under a different thread count") {
        const std::string bytes_json = read_file(report);
        const std::string bytes_csv = read_file(file_arg(dir, "report.csv"));
        REQUIRE(run_cli(dir, cmd).code == 0);
        CHECK(read_file(report) == bytes_json);
        CHECK(read_file(file_arg(dir, "report.csv")) == bytes_csv);
        // --threads only changes the echoed thread count, not the results
        REQUIRE(run_cli(dir, cmd + " --threads 2").code == 0);
        CHECK(parse_json_file(report).at("report").dump() ==
              json::parse(bytes_json).at("report").dump());
        CHECK(read_file(file_arg(dir, "report.csv")) == bytes_csv);
        REQUIRE(run_cli(dir, cmd + " --threads 1").code == 0);
        CHECK(parse_json_file(report).at("report").dump() ==
              json::parse(bytes_json).at("report").dump());
        CHECK(read_file(file_arg(dir, "report.csv")) == bytes_csv);
    }
}

TEST_CASE("bench alpha, cv and msweep suites write row tables") {
    TempDir dir;

    SUBCASE("alpha sweep") {
        const std::string out = file_arg(dir, "alpha.json");
        const RunResult r = run_cli(
            dir,
            "bench --suite alpha --scenario S1 --n-grid 200 --alphas 0.5,4 "
            "--reps 2 --n-test 1000 --seed 3 --out " +
                out);
        CHECK(r.code == 0);
        const json j = parse_json_file(out);
        CHECK(j.at("suite") == "alpha");
        CHECK(j.at("config").at("alphas") == json({0.5, 4.0}));
        CHECK(j.at("rows").size() == 2);
        for (const auto& row : j.at("rows"))
            CHECK(row.at("mean_mse").get<double>() >= 0.0);
        const std::string csv = read_file(file_arg(dir, "alpha.csv"));
        CHECK(csv.rfind("n,alpha,mean_mse\n", 0) == 0);
        CHECK(count_lines(csv) == 3);
    }

    SUBCASE("cv split robustness") {
        const std::string out = file_arg(dir, "cv.json");
        const RunResult r = run_cli(
            dir,
            "bench --suite cv --scenario S1 --n 150 --splits 3 --n-test 1000 "
            "--seed 5 --out " +
                out);
        CHECK(r.code == 0);
        const json j = parse_json_file(out);
        CHECK(j.at("config").at("n") == 150);
        CHECK(j.at("config").at("splits") == 3);
        REQUIRE(j.at("rows").size() == 3);
        CHECK(j.at("rows").at(0).at("split_seed") !=
              j.at("rows").at(1).at("split_seed"));
        const std::string csv = read_file(file_arg(dir, "cv.csv"));
        CHECK(csv.rfind("split_seed,alpha_hat,mse\n", 0) == 0);
        CHECK(count_lines(csv) == 4);
    }

    SUBCASE("m sweep") {
        const std::string out = file_arg(dir, "ms.json");
        const RunResult r = run_cli(
            dir,
            "bench --suite msweep --scenario S2 --m-list 1,2 --n 200 --reps 2 "
            "--n-test 1000 --seed 9 --out " +
                out);
        CHECK(r.code == 0);
        const json j = parse_json_file(out);
        CHECK(j.at("config").at("m_list") == json({1, 2}));
        CHECK(j.at("config").at("n") == 200);
        REQUIRE(j.at("rows").size() == 2);
        CHECK(j.at("rows").at(0).at("m") == 1);
        CHECK(j.at("rows").at(1).at("m") == 2);
        const std::string csv = read_file(file_arg(dir, "ms.csv"));
        CHECK(csv.rfind("m,mean_mse\n", 0) == 0);
        CHECK(count_lines(csv) == 3);
    }
}

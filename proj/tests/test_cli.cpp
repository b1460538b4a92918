#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "gaussmax/cli.hpp"
#include "gaussmax/errors.hpp"
#include "gaussmax/version.hpp"

using namespace gaussmax;
using nlohmann::json;

namespace {

std::string run_to_string(const RunConfig& config, int expected_status) {
    std::ostringstream out;
    const int status = run(config, out);
    CHECK(status == expected_status);
    return out.str();
}

json run_to_json(RunConfig config, int expected_status = 0) {
    config.no_timestamp = true;
    return json::parse(run_to_string(config, expected_status));
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << body;
    return path;
}

}  // namespace

TEST_CASE("bound command reports the certificate") {
    RunConfig config;
    config.command = RunConfig::Command::bound;
    config.n = 70;
    config.lambda_min = 1.0;
    config.lambda_max = 1.0;
    const json doc = run_to_json(config);
    CHECK(doc["tool"] == "gaussmax");
    CHECK(doc["version"] == std::string(kVersion));
    CHECK(doc["command"] == "bound");
    CHECK(doc["pass"] == true);
    CHECK(doc["results"]["certificate"]["threshold"].get<double>() ==
          doctest::Approx(1.3780968504272503).epsilon(1e-13));
    CHECK(doc["results"]["certificate"]["guaranteed_tail"].get<double>() == 0.5);
    CHECK(!doc.contains("timestamp"));
}

TEST_CASE("bound from a synthetic matrix target") {
    RunConfig config;
    config.command = RunConfig::Command::bound;
    config.target = "equicorr:100:0.5";
    const json doc = run_to_json(config);
    CHECK(doc["inputs"]["n"] == 100);
    CHECK(doc["inputs"]["sigma_source"] == "sequential");
    CHECK(doc["results"]["certificate"]["threshold"].get<double>() ==
          doctest::Approx(1.0846799620915744).epsilon(1e-12));
}

TEST_CASE("bound with eigenvalue bounds and best-of orderings") {
    RunConfig config;
    config.command = RunConfig::Command::bound;
    config.target = "equicorr:100:0.5";
    config.use_eigen = true;
    const json eig = run_to_json(config);
    CHECK(eig["inputs"]["sigma_source"] == "eigenvalue");
    CHECK(eig["results"]["certificate"]["sigma"].get<double>() ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

    config.use_eigen = false;
    config.ordering = "best-of:4";
    const json best = run_to_json(config);
    CHECK(best["inputs"]["sigma_source"] == "best-of-4");
    CHECK(best["results"].contains("ordering"));
}

TEST_CASE("bound gate failures and input validation") {
    RunConfig config;
    config.command = RunConfig::Command::bound;
    config.n = 69;
    config.lambda_min = 1.0;
    config.lambda_max = 1.0;
    std::ostringstream out;
    CHECK_THROWS_AS(run(config, out), gate_error);

    RunConfig bad;
    bad.command = RunConfig::Command::bound;
    bad.target = "equicorr:100";
    CHECK_THROWS_AS(run(bad, out), std::invalid_argument);

    RunConfig both;
    both.command = RunConfig::Command::bound;
    both.target = "identity:100";
    both.cov_path = "also.txt";
    CHECK_THROWS_AS(run(both, out), std::invalid_argument);

    RunConfig half;
    half.command = RunConfig::Command::bound;
    half.n = 100;
    half.lambda_min = 1.0;
    CHECK_THROWS_AS(run(half, out), std::invalid_argument);

    RunConfig fmt;
    fmt.command = RunConfig::Command::bound;
    fmt.n = 100;
    fmt.lambda_min = 1.0;
    fmt.lambda_max = 1.0;
    fmt.format = "yaml";
    CHECK_THROWS_AS(run(fmt, out), std::invalid_argument);

    RunConfig singular;
    singular.command = RunConfig::Command::bound;
    singular.target = "equicorr:5:1.0";
    CHECK_THROWS_AS(run(singular, out), decomposition_error);
}

TEST_CASE("bracket command emits the probability grid") {
    RunConfig config;
    config.command = RunConfig::Command::bracket;
    config.n = 100;
    const json doc = run_to_json(config);
    CHECK(doc["results"]["rows"].size() == 19);
    const auto& median = doc["results"]["rows"][9];
    CHECK(median["p"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(median["msq_lower"].get<double>() ==
          doctest::Approx(6.0129476421322296).epsilon(1e-12));
    CHECK(median["msq_upper"].get<double>() ==
          doctest::Approx(6.2830349179500593).epsilon(1e-12));
    CHECK(median["regime_ok"] == true);

    config.p_grid = {0.05};
    config.strict = true;
    const json strict = run_to_json(config, 1);
    CHECK(strict["pass"] == false);
}

TEST_CASE("certify command on a synthetic target") {
    RunConfig config;
    config.command = RunConfig::Command::certify;
    config.target = "identity:100";
    config.reps = 2000;
    const json doc = run_to_json(config);
    CHECK(doc["pass"] == true);
    bool saw_lower = false;
    bool saw_coupling = false;
    int upper_rows = 0;
    for (const auto& check : doc["checks"]) {
        const std::string name = check["name"].get<std::string>();
        if (name == "lower_bound") {
            saw_lower = true;
            CHECK(check["pass"] == true);
        }
        if (name == "gumbel_coupling") {
            saw_coupling = true;
        }
        if (name.rfind("upper_bound", 0) == 0) {
            ++upper_rows;
        }
    }
    CHECK(saw_lower);
    CHECK(saw_coupling);
    CHECK(upper_rows == 3);
}

TEST_CASE("certify with the hi inequality check") {
    RunConfig config;
    config.command = RunConfig::Command::certify;
    config.target = "equicorr:100:0.5";
    config.reps = 2000;
    config.hi_a = 2.0;
    config.hi_b = -0.5;
    const json doc = run_to_json(config);
    bool saw_hi = false;
    for (const auto& check : doc["checks"]) {
        if (check["name"] == "hi_inequality") {
            saw_hi = true;
            CHECK(check["pass"] == true);
        }
    }
    CHECK(saw_hi);
}

TEST_CASE("certify on a process window") {
    const auto spec = temp_file("gaussmax_test_ar1.txt",
                                "kind = ar1\nrho = 0.9\ntail_tol = 1e-6\n");
    RunConfig config;
    config.command = RunConfig::Command::certify;
    config.process_path = spec.string();
    config.n = 200;
    config.k = 1;
    config.reps = 2000;
    const json doc = run_to_json(config);
    CHECK(doc["pass"] == true);
    CHECK(doc["results"]["subcount"] == 200);
    std::filesystem::remove(spec);
}

TEST_CASE("scan command over n") {
    RunConfig config;
    config.command = RunConfig::Command::scan;
    config.target = "identity:100";
    config.scan_ns = {60, 70, 100};
    const json doc = run_to_json(config);
    REQUIRE(doc["results"]["rows"].size() == 3);
    CHECK(doc["results"]["rows"][0]["status"] == "gate");
    CHECK(doc["results"]["rows"][1]["status"] == "ok");
    CHECK(doc["results"]["rows"][2]["threshold"].get<double>() ==
          doctest::Approx(2.1941345587325623).epsilon(1e-12));

    config.strict = true;
    const json strict = run_to_json(config, 1);
    CHECK(strict["pass"] == false);

    config.scan_alphas = {0.1, 0.25};
    std::ostringstream out;
    CHECK_THROWS_AS(run(config, out), std::invalid_argument);
}

TEST_CASE("process-bound command with k sweep") {
    const auto spec = temp_file("gaussmax_test_ar1_sweep.txt",
                                "kind = ar1\nrho = 0.9\ntail_tol = 1e-6\n");
    RunConfig config;
    config.command = RunConfig::Command::process_bound;
    config.process_path = spec.string();
    config.n = 10000;
    config.k = 10;
    const json doc = run_to_json(config);
    CHECK(doc["results"]["certificate"]["threshold"].get<double>() ==
          doctest::Approx(2.5604757442406875).epsilon(1e-12));
    CHECK(doc["results"]["subcount"] == 1000);

    config.k_sweep = 50;
    const json sweep = run_to_json(config);
    CHECK(sweep["results"]["rows"].size() == 50);
    const long long best_k = sweep["results"]["best_k"].get<long long>();
    CHECK(best_k > 1);
    CHECK(best_k < 50);
    std::filesystem::remove(spec);
}

TEST_CASE("inequality-grid command") {
    RunConfig config;
    config.command = RunConfig::Command::inequality_grid;
    const json doc = run_to_json(config);
    CHECK(doc["pass"] == true);
    CHECK(doc["results"]["points"] == 3901);
    CHECK(doc["checks"].size() == 4);
}

TEST_CASE("reports are byte-identical across repeats and thread counts") {
    RunConfig config;
    config.command = RunConfig::Command::certify;
    config.target = "equicorr:100:0.5";
    config.reps = 1000;
    config.no_timestamp = true;

    const std::string first = run_to_string(config, 0);
    const std::string second = run_to_string(config, 0);
    CHECK(first == second);

    RunConfig parallel = config;
    parallel.threads = 4;
    CHECK(run_to_string(parallel, 0) == first);
}

TEST_CASE("csv format and file output") {
    RunConfig config;
    config.command = RunConfig::Command::bound;
    config.n = 100;
    config.lambda_min = 1.0;
    config.lambda_max = 1.0;
    config.format = "csv";
    config.no_timestamp = true;
    const std::string text = run_to_string(config, 0);
    CHECK(text.rfind("# gaussmax", 0) == 0);
    CHECK(text.find("n,alpha,sigma,tau") != std::string::npos);

    const auto out_path =
        std::filesystem::temp_directory_path() / "gaussmax_test_report.csv";
    config.out_path = out_path.string();
    std::ostringstream sink;
    CHECK(run(config, sink) == 0);
    CHECK(sink.str().empty());
    std::ifstream in(out_path);
    std::stringstream body;
    body << in.rdbuf();
    CHECK(body.str() == text);
    std::filesystem::remove(out_path);
}

TEST_CASE("timestamp appears unless suppressed") {
    RunConfig config;
    config.command = RunConfig::Command::inequality_grid;
    std::ostringstream out;
    CHECK(run(config, out) == 0);
    const json doc = json::parse(out.str());
    CHECK(doc.contains("timestamp"));
    const std::string stamp = doc["timestamp"].get<std::string>();
    CHECK(stamp.size() == 20);
    CHECK(stamp.back() == 'Z');
}

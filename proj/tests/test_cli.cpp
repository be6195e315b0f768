#include <filesystem>
#include <fstream>

#include <catch2/catch_amalgamated.hpp>

#include "beurlab/beurlab.hpp"

using namespace beurlab;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("beurlab_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config defaults resolve and validate", "[cli]") {
    for (const std::string e :
         {"identities", "regimes", "lowerbound", "jacobian", "sparse", "scaling"}) {
        ExperimentConfig cfg = resolve_config(e, json::object());
        CHECK(cfg.experiment == e);
    }
    CHECK_THROWS_AS(default_config("bogus"), ConfigError);
}

TEST_CASE("config rejects unknown keys everywhere", "[cli]") {
    CHECK_THROWS_AS(resolve_config("identities", json{{"mystery", 1}}), ConfigError);
    CHECK_THROWS_AS(resolve_config("identities", json{{"grid", {{"m", 4}}}}), ConfigError);
    CHECK_THROWS_AS(resolve_config("identities", json{{"exponents", {{"s", 2.0}}}}),
                    ConfigError);
    CHECK_THROWS_AS(resolve_config("lowerbound", json{{"symbol", {{"klass", "x"}}}}),
                    ConfigError);
}

TEST_CASE("config validates exponents, grid size and enums", "[cli]") {
    CHECK_THROWS_AS(resolve_config("lowerbound", json{{"exponents", {{"p", 1.0}}}}), ConfigError);
    CHECK_THROWS_AS(resolve_config("lowerbound", json{{"exponents", {{"q", 0.5}}}}), ConfigError);
    CHECK_THROWS_AS(resolve_config("identities", json{{"grid", {{"n", 100}}}}), ConfigError);
    CHECK_THROWS_AS(resolve_config("identities", json{{"grid", {{"n", 4}}}}), ConfigError);
    CHECK_THROWS_AS(resolve_config("identities", json{{"backend", "warp"}}), ConfigError);
    CHECK_THROWS_AS(resolve_config("identities", json{{"fault", "subtle"}}), ConfigError);
    CHECK_THROWS_AS(resolve_config("sparse", json{{"lambda_threshold", 1.0}}), ConfigError);
    CHECK_THROWS_AS(resolve_config("sparse", json{{"samples", 0}}), ConfigError);
}

TEST_CASE("--set overrides dotted paths", "[cli]") {
    ExperimentConfig cfg = resolve_config("identities", json::object(),
                                          {"grid.n=64", "seed=9", "fault=corrupt_multiplier"});
    CHECK(cfg.grid.n == 64);
    CHECK(cfg.seed == 9);
    CHECK(cfg.fault == "corrupt_multiplier");
    CHECK_THROWS_AS(resolve_config("identities", json::object(), {"grid.n"}), ConfigError);
    CHECK_THROWS_AS(resolve_config("identities", json::object(), {"grid.n=12"}), ConfigError);
}

TEST_CASE("identities experiment passes even at n = 8", "[cli]") {
    fs::path out = temp_dir("idn8");
    ExperimentConfig cfg = resolve_config("identities", json::object(), {"grid.n=8"});
    CHECK(run_identities(cfg, out) == kExitOk);
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "identities.csv"));
}

TEST_CASE("corrupted multiplier is caught and named", "[cli]") {
    fs::path out = temp_dir("fault");
    ExperimentConfig cfg =
        resolve_config("identities", json::object(), {"grid.n=32", "fault=corrupt_multiplier"});
    CHECK(run_identities(cfg, out) == kExitInvariantFailure);
    json rep = json::parse(slurp(out / "report.json"));
    bool fundamental_failed = false;
    for (const auto& row : rep["checks"])
        if (row["check"] == "fundamental_relation" && row["pass"] == false)
            fundamental_failed = true;
    CHECK(fundamental_failed);
}

TEST_CASE("experiment reports embed config and constants", "[cli]") {
    fs::path out = temp_dir("embed");
    ExperimentConfig cfg =
        resolve_config("sparse", json::object(), {"grid.n=16", "samples=5"});
    REQUIRE(run_sparse(cfg, out) == kExitOk);
    json rep = json::parse(slurp(out / "report.json"));
    CHECK(rep["config"]["grid"]["n"] == 16);
    CHECK(rep["constants"]["lambda_threshold"] == 2.0);
    CHECK(rep["constants"]["domination_constant"] == 9.0);
}

TEST_CASE("sparse experiment honors the stopping threshold", "[cli]") {
    fs::path out = temp_dir("lam4");
    ExperimentConfig cfg = resolve_config(
        "sparse", json::object(), {"grid.n=32", "samples=5", "lambda_threshold=4.0"});
    REQUIRE(run_sparse(cfg, out) == kExitOk);
    json rep = json::parse(slurp(out / "report.json"));
    for (const auto& s : rep["symbols"])
        CHECK(s["min_major_fraction"].get<double>() >= 0.75);
}

TEST_CASE("lowerbound experiment writes the sandwich and samples", "[cli]") {
    fs::path out = temp_dir("lb");
    ExperimentConfig cfg =
        resolve_config("lowerbound", json::object(), {"grid.n=32", "samples=8"});
    REQUIRE(run_lowerbound(cfg, out) == kExitOk);
    json rep = json::parse(slurp(out / "report.json"));
    CHECK(rep["pipeline"]["certified_lb"].get<double>() > 0.0);
    CHECK(rep["K_lb"].get<double>() > 0.0);
    CHECK(fs::exists(out / "lowerbound_samples.csv"));

    // constant symbol: all-zero report, still exit 0
    fs::path out2 = temp_dir("lbconst");
    ExperimentConfig cfg2 = resolve_config("lowerbound", json::object(),
                                           {"grid.n=32", "symbol.class=constant"});
    CHECK(run_lowerbound(cfg2, out2) == kExitOk);
    json rep2 = json::parse(slurp(out2 / "report.json"));
    CHECK(rep2["pipeline"]["degenerate"] == true);

    CHECK_THROWS_AS(
        run_lowerbound(resolve_config("lowerbound", json{{"exponents", {{"p", 2.0}, {"q", 4.0}}}}),
                       temp_dir("lbbad")),
        ExponentMismatch);
}

TEST_CASE("jacobian experiment exponent map", "[cli]") {
    fs::path out = temp_dir("jac");
    ExperimentConfig cfg = resolve_config("jacobian", json::object(),
                                          {"grid.n=32", "samples=3", "restarts=2"});
    REQUIRE(run_jacobian(cfg, out) == kExitOk);
    json rep = json::parse(slurp(out / "report.json"));
    CHECK(rep["commutator_exponents"][0] == 2.0);
    CHECK(rep["commutator_exponents"][1] == 2.0);
    CHECK(fs::exists(out / "jacobian_samples.csv"));
}

TEST_CASE("scaling experiment exact ratios", "[cli]") {
    fs::path out = temp_dir("scal");
    ExperimentConfig cfg = resolve_config("scaling", json::object());
    REQUIRE(run_scaling(cfg, out) == kExitOk);
    json rep = json::parse(slurp(out / "report.json"));
    CHECK(rep["homogeneous_drift"].get<double>() <= 0.01);
    CHECK(std::abs(rep["nonhomogeneous_slope"].get<double>() + 2.0) <= 0.1);
}

TEST_CASE("identical config and seed produce byte-identical outputs", "[cli]") {
    fs::path out1 = temp_dir("det1"), out2 = temp_dir("det2");
    for (const auto& out : {out1, out2}) {
        ExperimentConfig cfg =
            resolve_config("lowerbound", json::object(), {"grid.n=32", "samples=8"});
        REQUIRE(run_lowerbound(cfg, out) == kExitOk);
    }
    CHECK(slurp(out1 / "report.json") == slurp(out2 / "report.json"));
    CHECK(slurp(out1 / "lowerbound_samples.csv") == slurp(out2 / "lowerbound_samples.csv"));

    // a different seed must actually change the sampled values
    fs::path out3 = temp_dir("det3");
    ExperimentConfig cfg3 =
        resolve_config("lowerbound", json::object(), {"grid.n=32", "samples=8", "seed=2"});
    REQUIRE(run_lowerbound(cfg3, out3) == kExitOk);
    CHECK(slurp(out1 / "lowerbound_samples.csv") != slurp(out3 / "lowerbound_samples.csv"));
}

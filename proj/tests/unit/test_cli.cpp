#include "chainspill/io.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(CHAINSPILL_CLI) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string dir_flag(const fs::path& dir) { return "--data-dir " + dir.string(); }

// synth + ingest + build on a small panel, with a fast GARCH grid appended to the config.
fs::path prepared(const std::string& name) {
    const auto dir = test::scratch(name);
    REQUIRE(run("synth " + dir_flag(dir) + " --seed 3") == 0);
    std::string ini = chainspill::io::read_file(dir / "chainspill.ini");
    ini += "\n[garch]\np_max = 1\no_max = 1\nq_max = 1\np_min = 1\nq_min = 1\nrestarts = 1\n";
    ini += "\n[covariates]\np_max = 1\nd_max = 1\nq_max = 1\n";
    chainspill::io::write_file(dir / "chainspill.ini", ini);
    REQUIRE(run("ingest " + dir_flag(dir)) == 0);
    REQUIRE(run("build " + dir_flag(dir)) == 0);
    return dir;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 64") {
    CHECK(run("frobnicate") == 64);
    CHECK(run("") == 64);
    CHECK(run("estimate --jobs -3") == 64);
    CHECK(run("--help") == 0);
}

TEST_CASE("missing inputs are fatal") {
    const auto dir = test::scratch("cli_empty");
    CHECK(run("build " + dir_flag(dir)) == 1);
    CHECK(run("estimate " + dir_flag(dir)) == 1);
    CHECK(run("estimate " + dir_flag(dir) + " --variant quadratic") == 1);
}

TEST_CASE("pipeline end to end") {
    const auto dir = prepared("cli_pipeline");

    REQUIRE(run("describe " + dir_flag(dir)) == 0);
    const auto describe = chainspill::io::read_file(dir / "build" / "describe.csv");
    CHECK(describe.rfind("series,Mean,Std,Skewness,Kurtosis,Jarque-Bera,ADF,ARIMA,AIC\n", 0) == 0);

    REQUIRE(run("estimate " + dir_flag(dir) + " --variant linear_baseline") == 0);
    const auto report = chainspill::io::read_file(dir / "report" / "report.csv");
    const auto table = chainspill::io::parse_csv(report, "variant,chain,panel,coef_name,estimate,tstat,stars,p,o,q,r2,n_obs", "r");
    std::set<std::string> cells;
    for (const auto& row : table.rows) {
        CHECK(row[0] == "linear_baseline");
        cells.insert(row[1] + "/" + row[2]);
    }
    CHECK(cells.size() == 15);
    CHECK(fs::exists(dir / "report" / "report.md"));

    // report re-renders the markdown from report.csv without change.
    const auto md = chainspill::io::read_file(dir / "report" / "report.md");
    fs::remove(dir / "report" / "report.md");
    REQUIRE(run("report " + dir_flag(dir)) == 0);
    CHECK(chainspill::io::read_file(dir / "report" / "report.md") == md);

    // Rebuilding from the same inputs is idempotent.
    const auto panel = chainspill::io::read_file(dir / "build" / "panel.csv");
    const auto cov = chainspill::io::read_file(dir / "build" / "covariates.csv");
    REQUIRE(run("build " + dir_flag(dir)) == 0);
    CHECK(chainspill::io::read_file(dir / "build" / "panel.csv") == panel);
    CHECK(chainspill::io::read_file(dir / "build" / "covariates.csv") == cov);

    // Touching an input makes the build artifacts stale.
    const auto prices = dir / "canonical" / "prices.csv";
    fs::last_write_time(prices, fs::last_write_time(dir / "build" / "panel.csv") + std::chrono::hours(1));
    CHECK(run("estimate " + dir_flag(dir) + " --variant linear_baseline") == 1);
    REQUIRE(run("build " + dir_flag(dir)) == 0);
    fs::last_write_time(dir / "build" / "panel.csv", fs::last_write_time(prices) + std::chrono::hours(1));
    fs::last_write_time(dir / "build" / "covariates.csv", fs::last_write_time(prices) + std::chrono::hours(1));
    CHECK(run("estimate " + dir_flag(dir) + " --variant linear_baseline") == 0);
}

TEST_CASE("data dir from the environment") {
    const auto dir = test::scratch("cli_env");
    ::setenv("CHAINSPILL_DATA_DIR", dir.c_str(), 1);
    CHECK(run("synth --seed 9") == 0);
    ::unsetenv("CHAINSPILL_DATA_DIR");
    CHECK(fs::exists(dir / "synth" / "truth.json"));
}

}

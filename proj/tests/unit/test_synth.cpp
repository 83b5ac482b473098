#include "chainspill/error.hpp"
#include "chainspill/io.hpp"
#include "chainspill/synth.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace chainspill;

TEST_SUITE("synth") {

TEST_CASE("same seed gives byte-identical datasets") {
    auto cfg = synth::default_config();
    cfg.T = 200;
    cfg.seed = 11;
    const auto a = test::scratch("synth_a");
    const auto b = test::scratch("synth_b");
    synth::write_dataset(synth::generate_panel(cfg), a);
    synth::write_dataset(synth::generate_panel(cfg), b);
    for (const char* f : {"raw/assets.jsonl", "raw/swaps.csv", "raw/caps.csv", "raw/series.csv", "synth/panel.csv",
                          "synth/covariates.csv", "synth/truth.json", "chainspill.ini"}) {
        CAPTURE(f);
        CHECK(io::read_file(a / f) == io::read_file(b / f));
    }
    cfg.seed = 12;
    CHECK(format_panel_csv(synth::generate_panel(cfg).truth_panels) != io::read_file(a / "synth/panel.csv"));
}

TEST_CASE("explosive spillover is rejected") {
    auto cfg = synth::default_config();
    cfg.own_lag = 0.9;
    for (auto& row : cfg.spillover) row.fill(0.3);
    for (std::size_t i = 0; i < 5; ++i) cfg.spillover[i][i] = 0.0;
    CHECK(synth::spectral_radius(cfg) >= 1.0);
    try {
        (void)synth::generate_panel(cfg);
        FAIL("expected UnstableConfig");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnstableConfig);
    }
    CHECK(synth::spectral_radius(synth::default_config()) < 1.0);
}

TEST_CASE("GJR shocks match the unconditional variance") {
    econ::GjrParams p{0.05, {0.05}, {0.08}, {0.85}};
    std::mt19937_64 rng(3);
    const auto e = synth::simulate_gjr(100000, p, rng);
    const double var = std::inner_product(e.begin(), e.end(), e.begin(), 0.0) / static_cast<double>(e.size());
    const double target = 0.05 / (1.0 - 0.05 - 0.04 - 0.85);
    CHECK(std::abs(var / target - 1.0) < 0.05);
}

TEST_CASE("events land at the configured half-days") {
    io::Config ini;
    ini.set("synth.T", "300");
    ini.set("synth.seed", "5");
    ini.set("synth.events", "Arbitrum@2023-02-01/H2:0.9, Solana@2023-03-10/H1:-0.9");
    const auto cfg = synth::config_from(ini);
    REQUIRE(cfg.events.size() == 2);
    CHECK(cfg.T == 300);
    CHECK(cfg.events[0].chain == Chain::Arbitrum);
    CHECK(cfg.events[0].at == test::hd("2023-02-01", Half::H2));
    CHECK(cfg.events[1].magnitude == doctest::Approx(-0.9));

    const auto data = synth::generate_panel(cfg);
    for (const auto& ev : cfg.events) {
        const auto& s = data.truth_panels.at(ev.chain).get(PortfolioKind::All);
        // The shock dominates every other half-day of that chain.
        double others = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s.coverage()[i] != ev.at && !is_missing(s.value(i))) others = std::max(others, std::abs(s.value(i)));
        }
        CHECK(std::abs(s.at(ev.at)) > others);
        CHECK(s.at(ev.at) * ev.magnitude > 0.0);
    }
    CHECK(synth::truth_json(data).find("2023-02-01") != std::string::npos);

    io::Config bad;
    bad.set("synth.events", "Arbitrum-2023-02-01");
    CHECK_THROWS_AS((void)synth::config_from(bad), Error);
}

TEST_CASE("regression helper") {
    const auto d = synth::simulate_gjr_regression(500, 0.3, {0.05, {0.05}, {0.0}, {0.9}}, 1);
    CHECK(d.X.rows() == 500);
    CHECK(d.X.cols() == 1);
    CHECK(d.names == std::vector<std::string>{"x"});
}

}

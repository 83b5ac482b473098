#include "chainspill/error.hpp"
#include "chainspill/ingest.hpp"
#include "chainspill/kernels.hpp"
#include "chainspill/portfolio.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace chainspill;

namespace {

Series prices(std::vector<double> v, HalfDayId first = test::hd("2023-03-17")) {
    Series s("p", HalfDayRange(first, v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) s.set_index(i, v[i]);
    return s;
}

}  // namespace

TEST_SUITE("portfolio") {

TEST_CASE("log returns") {
    const auto flat = log_return(prices({3, 3, 3, 3}));
    CHECK(is_missing(flat.value(0)));
    for (std::size_t i = 1; i < 4; ++i) CHECK(flat.value(i) == 0.0);
    CHECK(log_return(prices({1, 2})).value(1) == doctest::Approx(0.693147).epsilon(1e-6));
    const auto gap = log_return(prices({1, kMissing, 2}));
    CHECK(is_missing(gap.value(1)));
    CHECK(is_missing(gap.value(2)));
    CHECK_THROWS_AS((void)log_return(prices({1, 0})), Error);
}

TEST_CASE("cap-weighted portfolio return") {
    CHECK(portfolio_return({{"a", 0.01}}, {{"a", 5}}) == doctest::Approx(0.01));
    CHECK(portfolio_return({{"a", 0.01}, {"b", 0.03}}, {{"a", 1}, {"b", 1}}) == doctest::Approx(0.02));
    CHECK(portfolio_return({{"a", 0.0}, {"b", 0.04}}, {{"a", 3}, {"b", 1}}) == doctest::Approx(0.01));
    CHECK_THROWS_AS((void)portfolio_return({}, {}), Error);
    CHECK_THROWS_AS((void)portfolio_return({{"a", 0.01}}, {{"a", 0.0}}), Error);
    // A zero-cap member changes nothing.
    CHECK(portfolio_return({{"a", 0.0}, {"b", 0.04}, {"z", 0.5}}, {{"a", 3}, {"b", 1}, {"z", 0.0}}) ==
          doctest::Approx(0.01));
}

TEST_CASE("chain panel composition") {
    const auto grid = HalfDayRange(test::hd("2023-03-17"), 2);
    std::vector<AssetRecord> recs(2);
    recs[0].asset_id = recs[0].logical_id = "listed";
    recs[0].cex_listing_date = parse_date("2023-01-01");
    recs[1].asset_id = recs[1].logical_id = "unlisted";
    const auto timeline = membership_timeline(recs, grid);
    std::map<std::string, Series> px{{"listed", prices({1, std::exp(0.02)})}, {"unlisted", prices({1, std::exp(0.04)})}};
    std::map<std::string, Series> caps{{"listed", prices({7, 7}, test::hd("2023-03-16", Half::H2))},
                                       {"unlisted", prices({7, 7}, test::hd("2023-03-16", Half::H2))}};
    const auto panel = build_chain_panel(Chain::Ethereum, timeline, px, caps, grid);
    CHECK(panel.get(PortfolioKind::All).value(1) == doctest::Approx(0.03));
    CHECK(panel.get(PortfolioKind::CEX).value(1) == doctest::Approx(0.02));
    CHECK(panel.get(PortfolioKind::NonCEX).value(1) == doctest::Approx(0.04));
    CHECK(panel.get(PortfolioKind::Local).value(1) == doctest::Approx(0.03));

    // All assets multi-chain: Local is empty throughout.
    auto multi = recs;
    for (auto& r : multi) r.multi_chain = true;
    const auto p2 = build_chain_panel(Chain::Ethereum, membership_timeline(multi, grid), px, caps, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(is_missing(p2.get(PortfolioKind::Local).value(i)));
        CHECK(p2.get(PortfolioKind::Local).status(i) == PointStatus::EmptyPortfolio);
    }
}

TEST_CASE("golden five-asset panel") {
    const auto assets = ingest::parse_assets(io::read_file(test::fixture("portfolio_assets.jsonl")));
    const auto px_store = ingest::parse_series_csv(io::read_file(test::fixture("portfolio_prices.csv")));
    const auto cap_store = ingest::parse_series_csv(io::read_file(test::fixture("portfolio_caps.csv")));
    const auto grid = HalfDayRange(test::hd("2023-03-01"), 20);
    std::map<std::string, Series> px, caps;
    for (const auto& [id, pts] : px_store) px.emplace(id, ingest::to_half_day_series(id, pts).reindex(grid));
    for (const auto& [id, pts] : cap_store) caps.emplace(id, ingest::to_half_day_series(id, pts).reindex(grid));
    std::vector<AssetRecord> recs = assets;
    mark_multi_chain(recs);
    const auto panel = build_chain_panel(Chain::Ethereum, membership_timeline(recs, grid), px, caps, grid);

    const auto expected = io::read_csv(test::fixture("portfolio_expected.csv"), "kind,date,half,value,missing_flag");
    REQUIRE(expected.rows.size() == 80);
    for (const auto& row : expected.rows) {
        const auto kind = *parse_portfolio_kind(row[0]);
        const HalfDayId h{parse_date(row[1]), parse_half(row[2])};
        const auto& s = panel.get(kind);
        CAPTURE(row[0]);
        CAPTURE(h.to_string());
        CHECK(static_cast<int>(s.status_at(h)) == std::stoi(row[4]));
        if (row[3] != "NA") CHECK(s.at(h) == doctest::Approx(io::parse_double(row[3])).epsilon(1e-13));
    }
}

TEST_CASE("mixture identity and cap-scale invariance") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> ret(0.0, 0.05);
    std::uniform_real_distribution<double> cap(1.0, 1e6), lambda(1e-3, 1e3);
    std::uniform_int_distribution<int> size(1, 8), coin(0, 1);
    for (int draw = 0; draw < 1000; ++draw) {
        std::map<std::string, double> rc, rn, ra, cc, cn, ca;
        const int nc = size(rng), nn = size(rng);
        for (int i = 0; i < nc + nn; ++i) {
            const std::string id = "a" + std::to_string(i);
            const double r = ret(rng), c = cap(rng);
            ra[id] = r;
            ca[id] = c;
            (i < nc ? rc : rn)[id] = r;
            (i < nc ? cc : cn)[id] = c;
        }
        double sc = 0, st = 0;
        for (auto& [id, c] : cc) sc += c;
        for (auto& [id, c] : ca) st += c;
        const double s = sc / st;
        const double all = portfolio_return(ra, ca);
        const double mix = s * portfolio_return(rc, cc) + (1 - s) * portfolio_return(rn, cn);
        CHECK(std::abs(all - mix) <= 1e-12 * std::max(1.0, std::abs(all)));
        const double l = lambda(rng);
        auto scaled = ca;
        for (auto& [id, c] : scaled) c *= l;
        CHECK(std::abs(portfolio_return(ra, scaled) - all) <= 1e-12 * std::max(1.0, std::abs(all)));
    }
}

TEST_CASE("weights are non-negative and sum to one") {
    const auto assets = ingest::parse_assets(io::read_file(test::fixture("portfolio_assets.jsonl")));
    const auto grid = HalfDayRange(test::hd("2023-03-01"), 20);
    std::map<std::string, Series> px, caps;
    for (const auto& [id, pts] : ingest::parse_series_csv(io::read_file(test::fixture("portfolio_prices.csv")))) {
        px.emplace(id, ingest::to_half_day_series(id, pts).reindex(grid));
    }
    for (const auto& [id, pts] : ingest::parse_series_csv(io::read_file(test::fixture("portfolio_caps.csv")))) {
        caps.emplace(id, ingest::to_half_day_series(id, pts).reindex(grid));
    }
    auto recs = assets;
    mark_multi_chain(recs);
    const auto panel = build_chain_panel(Chain::Ethereum, membership_timeline(recs, grid), px, caps, grid);
    for (auto kind : kAllKinds) {
        for (const auto& w : panel.weight_log[static_cast<std::size_t>(kind)]) {
            if (w.empty()) continue;
            double total = 0;
            for (const auto& e : w) {
                CHECK(e.weight >= 0.0);
                total += e.weight;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("panel csv round trip") {
    const auto grid = HalfDayRange(test::hd("2023-03-17"), 3);
    PanelSet set;
    ChainPanel p;
    p.chain = Chain::Solana;
    for (auto k : kAllKinds) p.get(k) = ReturnSeries(panel_series_id(Chain::Solana, k), grid);
    p.get(PortfolioKind::All).set_index(1, 0.125);
    p.get(PortfolioKind::Local).mark_index(2, PointStatus::EmptyPortfolio);
    set.emplace(Chain::Solana, p);
    const auto text = format_panel_csv(set);
    CHECK(format_panel_csv(parse_panel_csv(text)) == text);
    CHECK(panel_series_id(Chain::Solana, PortfolioKind::NonCEX) == "R_nonCEX_Solana");
}

TEST_CASE("openmp kernel matches the serial reference bit for bit") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> ret(0.0, 0.05);
    std::uniform_real_distribution<double> cap(1.0, 1e6);
    std::uniform_int_distribution<int> coin(0, 9);
    kernels::PortfolioMatrices m;
    m.periods = 300;
    m.assets = 12;
    std::vector<std::string> ids;
    for (std::size_t a = 0; a < m.assets; ++a) ids.push_back("a" + std::to_string(100 + a));
    for (std::size_t k = 0; k < m.periods * m.assets; ++k) {
        m.returns.push_back(coin(rng) == 0 ? kMissing : ret(rng));
        m.caps_prev.push_back(coin(rng) == 0 ? kMissing : cap(rng));
        m.member.push_back(coin(rng) < 6 ? 1 : 0);
    }
    const auto ser = kernels::weighted_returns_serial(m, ids);
    for (int jobs : {1, 2, 4}) {
        const auto omp = kernels::weighted_returns_omp(m, jobs);
        for (std::size_t t = 0; t < m.periods; ++t) {
            CHECK(omp.status[t] == ser.status[t]);
            if (ser.status[t] == PointStatus::Present) CHECK(omp.value[t] == ser.value[t]);
        }
    }
}

}

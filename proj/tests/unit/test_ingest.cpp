#include "chainspill/error.hpp"
#include "chainspill/ingest.hpp"
#include "helpers.hpp"

#include <doctest.h>
#include <httplib.h>

#include <algorithm>
#include <random>
#include <thread>

using namespace chainspill;
using namespace chainspill::ingest;

namespace {

SwapTrade trade(const char* ts, double base, double quote) {
    return {"p", parse_rfc3339(ts), base, quote, Direction::Buy};
}

PoolMeta fixture_pool() {
    const auto pools = read_pools_csv(test::fixture("pools.csv"));
    REQUIRE(pools.size() == 1);
    return pools.front();
}

std::string word(long long v) {
    // 64 hex digits, two's complement.
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return std::string(48, v < 0 ? 'f' : '0') + buf;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("empty event stream decodes to nothing") {
    const std::vector<std::string> none;
    const auto r = decode_swap_events(none, fixture_pool(), DecodePolicy::Strict);
    CHECK(r.trades.empty());
    CHECK(r.issues.empty());
}

TEST_CASE("fixture log decodes to the documented prices") {
    const auto records = read_swap_event_log(test::fixture("swap_events.log"));
    REQUIRE(records.size() == 12);
    const auto r = decode_swap_events(records, fixture_pool(), DecodePolicy::Strict);
    REQUIRE(r.trades.size() == 12);
    const auto expected = io::read_csv(test::fixture("swap_events_expected.csv"),
                                       "ts,base_amount,quote_amount,price,direction");
    REQUIRE(expected.rows.size() == 12);
    for (std::size_t i = 0; i < 12; ++i) {
        const auto& row = expected.rows[i];
        const auto& t = r.trades[i];
        CHECK(t.ts == parse_rfc3339(row[0]));
        CHECK(t.base_amount == doctest::Approx(io::parse_double(row[1])).epsilon(1e-14));
        CHECK(t.quote_amount == doctest::Approx(io::parse_double(row[2])).epsilon(1e-14));
        CHECK(t.price() == doctest::Approx(io::parse_double(row[3])).epsilon(1e-13));
        CHECK((t.direction == Direction::Buy) == (row[4] == "buy"));
        CHECK(t.base_amount > 0.0);
        CHECK(t.quote_amount > 0.0);
    }
}

TEST_CASE("truncated payload fails in strict mode with the record index") {
    auto records = read_swap_event_log(test::fixture("swap_events.log"));
    records[4] = records[4].substr(0, records[4].size() - 10);
    try {
        (void)decode_swap_events(records, fixture_pool(), DecodePolicy::Strict);
        FAIL("expected MalformedEvent");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MalformedEvent);
        CHECK(std::string(e.what()).find("record 4") != std::string::npos);
    }
    const auto lenient = decode_swap_events(records, fixture_pool(), DecodePolicy::Lenient);
    CHECK(lenient.trades.size() == 11);
    REQUIRE(lenient.issues.size() == 1);
    CHECK(lenient.issues[0].record_index == 4);
}

TEST_CASE("other pools are skipped, or rejected in strict mode") {
    std::vector<std::string> records{"0xother,2023-03-17T00:00:00Z,0x" + word(-5) + word(7)};
    PoolMeta pool{"0xpoolA", "A", true, 0, 0};
    CHECK(decode_swap_events(records, pool, DecodePolicy::Lenient).trades.empty());
    CHECK_THROWS_AS((void)decode_swap_events(records, pool, DecodePolicy::Strict), Error);
}

TEST_CASE("token ordering and same-sign deltas") {
    PoolMeta pool{"p", "A", false, 0, 0};
    std::vector<std::string> records{"p,2023-03-17T00:00:00Z,0x" + word(6) + word(-2),
                                     "p,2023-03-17T01:00:00Z,0x" + word(6) + word(2)};
    const auto r = decode_swap_events(records, pool, DecodePolicy::Lenient);
    REQUIRE(r.trades.size() == 1);
    CHECK(r.trades[0].base_amount == 2.0);
    CHECK(r.trades[0].quote_amount == 6.0);
    CHECK(r.trades[0].direction == Direction::Buy);
    CHECK(r.issues.size() == 1);
}

TEST_CASE("decoded amounts are always positive") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long long> amt(-1000000, 1000000);
    PoolMeta pool{"p", "A", true, 3, 2};
    std::vector<std::string> records;
    for (int i = 0; i < 500; ++i) {
        records.push_back("p,2023-03-17T00:00:00Z,0x" + word(amt(rng)) + word(amt(rng)));
    }
    for (const auto& t : decode_swap_events(records, pool, DecodePolicy::Lenient).trades) {
        CHECK(t.base_amount > 0.0);
        CHECK(t.quote_amount > 0.0);
    }
}

TEST_CASE("single trade sets the price") {
    const auto grid = HalfDayRange(test::hd("2023-03-17"), 1);
    const std::vector<SwapTrade> ts{trade("2023-03-17T03:00:00Z", 2, 3)};
    const auto s = reconstruct_price_series(ts, grid);
    CHECK(s.value(0) == 1.5);
}

TEST_CASE("last trade in a half-day wins") {
    const auto grid = HalfDayRange(test::hd("2023-03-17"), 1);
    const std::vector<SwapTrade> ts{trade("2023-03-17T03:00:00Z", 1, 1.0), trade("2023-03-17T09:00:00Z", 1, 1.2)};
    CHECK(reconstruct_price_series(ts, grid).value(0) == doctest::Approx(1.2));
}

TEST_CASE("staleness limit of four half-days") {
    const auto grid = HalfDayRange::between(test::hd("2023-03-17"), test::hd("2023-03-20"));
    const std::vector<SwapTrade> ts{trade("2023-03-17T03:00:00Z", 2, 3)};
    const auto s = reconstruct_price_series(ts, grid, 4);
    // Carried through (d+2, H2); missing from (d+3, H1).
    for (auto h : HalfDayRange::between(test::hd("2023-03-17"), test::hd("2023-03-19", Half::H2))) {
        CHECK(s.at(h) == 1.5);
    }
    CHECK(is_missing(s.at(test::hd("2023-03-20"))));
    CHECK(s.status_at(test::hd("2023-03-20")) == PointStatus::Missing);
    CHECK_THROWS_AS((void)reconstruct_price_series(std::vector<SwapTrade>{}, grid), Error);
}

TEST_CASE("cap merge averages the sources present") {
    const auto h = test::hd("2023-03-17");
    auto obs = [&](CapSource s, double v) { return RawCapObservation{"A", h, s, v}; };
    {
        std::vector<RawCapObservation> v{obs(CapSource::ProviderA, 10), obs(CapSource::ProviderB, 20),
                                         obs(CapSource::Computed, 30)};
        CHECK(merge_market_cap(v).at(h) == 20.0);
    }
    {
        std::vector<RawCapObservation> v{obs(CapSource::ProviderA, 42)};
        CHECK(merge_market_cap(v).at(h) == 42.0);
    }
    {
        std::vector<RawCapObservation> v{obs(CapSource::ProviderA, 10), obs(CapSource::Computed, 30)};
        CHECK(merge_market_cap(v).at(h) == 20.0);
    }
}

TEST_CASE("cap merge does not depend on input order") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(1e5, 1e9);
    std::vector<RawCapObservation> v;
    for (auto h : HalfDayRange(test::hd("2023-01-01"), 50)) {
        for (auto s : {CapSource::ProviderA, CapSource::ProviderB, CapSource::Computed}) v.push_back({"A", h, s, u(rng)});
    }
    const auto ref = merge_market_cap(v);
    for (int k = 0; k < 10; ++k) {
        std::shuffle(v.begin(), v.end(), rng);
        const auto again = merge_market_cap(v);
        for (std::size_t i = 0; i < ref.size(); ++i) CHECK(again.value(i) == ref.value(i));
    }
}

TEST_CASE("asset fixture: tags, exclusion and bridging") {
    SourceDescriptor src;
    src.uri = test::fixture("assets.jsonl").string();
    const auto all = fetch_universe_all(src);
    REQUIRE(all.size() == 4);
    const auto find = [&](const std::string& id) {
        return *std::find_if(all.begin(), all.end(), [&](const auto& r) { return r.asset_id == id; });
    };
    CHECK(find("eth-usdc").exclusion == ExclusionClass::Stablecoin);
    CHECK(find("eth-pepe").exclusion == ExclusionClass::None);
    CHECK(find("eth-link").multi_chain);
    CHECK(find("arb-link").multi_chain);
    CHECK(find("eth-link").logical_id == find("arb-link").logical_id);
    CHECK(find("eth-link").address != find("arb-link").address);
    CHECK_FALSE(find("eth-pepe").multi_chain);
    CHECK(fetch_universe(src, Chain::Ethereum).size() == 3);
    // Replays are identical.
    CHECK(fetch_universe_all(src) == all);
    CHECK(parse_assets(format_assets_jsonl(all)) == all);
}

TEST_CASE("http source pages until exhausted and sends credentials") {
    httplib::Server server;
    std::string seen_key;
    const std::string page0 = io::read_file(test::fixture("assets.jsonl"));
    server.Get("/assets", [&](const httplib::Request& req, httplib::Response& res) {
        seen_key = req.get_header_value("x-api-key");
        if (req.get_param_value("page") == "0") {
            res.set_content(page0, "application/x-ndjson");
        } else {
            res.status = 404;
        }
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread th([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    SourceDescriptor src;
    src.kind = SourceKind::HttpEndpoint;
    src.name = "TESTSRC";
    src.uri = "http://127.0.0.1:" + std::to_string(port) + "/assets";
    src.credentials = "k123";
    const auto recs = fetch_universe_all(src);
    server.stop();
    th.join();
    CHECK(recs.size() == 4);
    CHECK(seen_key == "k123");
}

TEST_CASE("unreachable http endpoint") {
    SourceDescriptor src;
    src.kind = SourceKind::HttpEndpoint;
    src.uri = "http://127.0.0.1:1/assets";
    try {
        (void)fetch_universe_all(src);
        FAIL("expected SourceUnavailable");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SourceUnavailable);
    }
}

TEST_CASE("csv round trips") {
    std::vector<SwapTrade> ts{trade("2023-03-17T03:00:00Z", 2, 3), trade("2023-03-17T15:00:00Z", 0.5, 0.125)};
    ts[1].direction = Direction::Sell;
    const auto back = parse_swaps_csv(format_swaps_csv(ts));
    REQUIRE(back.size() == 2);
    CHECK(back[1].ts == ts[1].ts);
    CHECK(back[1].quote_amount == 0.125);
    CHECK(back[1].direction == Direction::Sell);

    SeriesStore store;
    store["rate.HIBOR"] = {{parse_date("2023-03-17"), std::nullopt, 4.25}};
    store["native.ETH"] = {{parse_date("2023-03-17"), Half::H2, 1800.5}};
    CHECK(format_series_csv(parse_series_csv(format_series_csv(store))) == format_series_csv(store));
    CHECK_THROWS_AS((void)parse_series_csv("id,date,half,value\n"), Error);
    CHECK_THROWS_AS((void)parse_swaps_csv("pool_id,ts,base_amount,quote_amount,direction\np,2023-03-17T00:00:00Z,-1,2,buy\n"),
                    Error);
}

}

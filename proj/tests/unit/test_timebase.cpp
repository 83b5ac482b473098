#include "chainspill/error.hpp"
#include "chainspill/timebase.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <random>

using namespace chainspill;

TEST_SUITE("timebase") {

TEST_CASE("instants map to the half-day that contains them") {
    CHECK(half_day_index(parse_rfc3339("2023-03-17T05:00:00Z")) == test::hd("2023-03-17", Half::H1));
    CHECK(half_day_index(parse_rfc3339("2023-03-17T12:00:00Z")) == test::hd("2023-03-17", Half::H2));
    CHECK(half_day_index(parse_rfc3339("2023-03-17T23:59:59Z")) == test::hd("2023-03-17", Half::H2));
    CHECK(half_day_index(parse_rfc3339("2023-03-18T00:00:00Z")) == test::hd("2023-03-18", Half::H1));
    CHECK(half_day_index(parse_rfc3339("2023-03-17T11:59:59.999Z")) == test::hd("2023-03-17", Half::H1));
}

TEST_CASE("offsets are normalised to UTC") {
    CHECK(half_day_index(parse_rfc3339("2023-03-17T13:30:00+02:00")) == test::hd("2023-03-17", Half::H1));
    CHECK(half_day_index(parse_rfc3339("2023-03-17T01:00:00-02:00")) == test::hd("2023-03-17", Half::H1));
    CHECK(half_day_index(parse_rfc3339("2023-03-17T23:00:00-02:00")) == test::hd("2023-03-18", Half::H1));
    CHECK_THROWS_AS((void)parse_rfc3339("2023-03-17 05:00"), Error);
}

TEST_CASE("successor steps H1 to H2 and H2 to the next day") {
    CHECK(successor(test::hd("2023-03-17", Half::H1)) == test::hd("2023-03-17", Half::H2));
    CHECK(successor(test::hd("2023-03-17", Half::H2)) == test::hd("2023-03-18", Half::H1));
    CHECK(successor(test::hd("2023-12-31", Half::H2)) == test::hd("2024-01-01", Half::H1));
    CHECK(test::hd("2024-03-01").prev() == test::hd("2024-02-29", Half::H2));
}

TEST_CASE("ordering agrees with interval starts") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> ord(38000, 40000);
    for (int i = 0; i < 2000; ++i) {
        const auto a = HalfDayId::from_ordinal(ord(rng));
        const auto b = HalfDayId::from_ordinal(ord(rng));
        CHECK((a < b) == (a.start() < b.start()));
        CHECK(HalfDayId::from_ordinal(a.ordinal()) == a);
    }
}

TEST_CASE("half_day_index is monotone") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int64_t> ms(0, 400LL * 86400 * 1000);
    const Instant base = parse_rfc3339("2023-01-01T00:00:00Z");
    for (int i = 0; i < 5000; ++i) {
        auto t1 = base + std::chrono::milliseconds(ms(rng));
        auto t2 = base + std::chrono::milliseconds(ms(rng));
        if (t2 < t1) std::swap(t1, t2);
        CHECK(half_day_index(t1) <= half_day_index(t2));
        CHECK(half_day_index(t1).start() <= t1);
    }
}

TEST_CASE("session alignment") {
    CHECK(session_alignment(EquityMarket::SP500, Half::H1) == Session::Overnight);
    CHECK(session_alignment(EquityMarket::SP500, Half::H2) == Session::Intraday);
    CHECK(session_alignment(EquityMarket::FTSE100, Half::H1) == Session::Overnight);
    CHECK(session_alignment(EquityMarket::FTSE100, Half::H2) == Session::Intraday);
    CHECK(session_alignment(EquityMarket::HangSeng, Half::H1) == Session::Intraday);
    CHECK(session_alignment(EquityMarket::HangSeng, Half::H2) == Session::Overnight);
    for (auto m : {EquityMarket::SP500, EquityMarket::HangSeng, EquityMarket::FTSE100}) {
        CHECK(session_alignment(m, Half::H1) != session_alignment(m, Half::H2));
    }
}

TEST_CASE("ranges") {
    const auto r = HalfDayRange::between(test::hd("2023-03-17", Half::H2), test::hd("2023-03-19", Half::H1));
    CHECK(r.size() == 4);
    CHECK(r.index_of(test::hd("2023-03-18", Half::H2)) == 2u);
    CHECK_FALSE(r.contains(test::hd("2023-03-17", Half::H1)));
    std::size_t n = 0;
    for (auto h : r) {
        CHECK(r[n] == h);
        ++n;
    }
    CHECK(n == r.size());
    CHECK(HalfDayRange::days(parse_date("2023-03-17"), parse_date("2023-03-17")).size() == 2);
    CHECK(test::hd("2023-03-17", Half::H2).to_string() == "2023-03-17/H2");
    CHECK_THROWS_AS((void)parse_date("2023-02-30"), Error);
    CHECK_THROWS_AS((void)parse_half("H3"), Error);
}

}

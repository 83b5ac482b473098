#include "chainspill/timebase.hpp"

#include "chainspill/error.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace chainspill {

namespace {

template <typename T>
T parse_int(std::string_view text, std::string_view what) {
    T value{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        fail(ErrorCode::InvalidArgument, "bad " + std::string(what) + " '" + std::string(text) + "'");
    }
    return value;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

HalfDayId HalfDayId::from_ordinal(std::int64_t ordinal) noexcept {
    const std::int64_t day = floor_div(ordinal, 2);
    const auto half = static_cast<Half>(ordinal - 2 * day);
    return HalfDayId{Date{std::chrono::days{day}}, half};
}

Instant HalfDayId::start() const noexcept {
    Instant ts{date};
    if (half == Half::H2) ts += std::chrono::hours{12};
    return ts;
}

std::string HalfDayId::to_string() const { return format_date(date) + "/" + std::string(chainspill::to_string(half)); }

HalfDayId half_day_index(Instant ts) noexcept {
    const auto day = std::chrono::floor<std::chrono::days>(ts);
    const auto into = ts - day;
    return HalfDayId{Date{day}, into < std::chrono::hours{12} ? Half::H1 : Half::H2};
}

HalfDayRange HalfDayRange::between(HalfDayId first, HalfDayId last) {
    if (last < first) return HalfDayRange(first, 0);
    return HalfDayRange(first, static_cast<std::size_t>(last.ordinal() - first.ordinal() + 1));
}

HalfDayRange HalfDayRange::days(Date start, Date end) {
    return between(HalfDayId{start, Half::H1}, HalfDayId{end, Half::H2});
}

std::optional<std::size_t> HalfDayRange::index_of(HalfDayId id) const noexcept {
    const std::int64_t offset = id.ordinal() - first_.ordinal();
    if (offset < 0 || offset >= static_cast<std::int64_t>(count_)) return std::nullopt;
    return static_cast<std::size_t>(offset);
}

Session session_alignment(EquityMarket market, Half half) noexcept {
    // Asia trades inside H1; Europe and the US finish their sessions inside H2.
    const bool asia = market == EquityMarket::HangSeng;
    if (half == Half::H1) return asia ? Session::Intraday : Session::Overnight;
    return asia ? Session::Overnight : Session::Intraday;
}

std::string_view to_string(EquityMarket market) noexcept {
    switch (market) {
        case EquityMarket::SP500: return "SP500";
        case EquityMarket::HangSeng: return "HangSeng";
        case EquityMarket::FTSE100: return "FTSE100";
    }
    return "?";
}

std::string_view to_string(Session session) noexcept {
    return session == Session::Overnight ? "overnight" : "intraday";
}

std::string_view to_string(Half half) noexcept { return half == Half::H1 ? "H1" : "H2"; }

std::optional<EquityMarket> parse_equity_market(std::string_view text) noexcept {
    if (text == "SP500") return EquityMarket::SP500;
    if (text == "HangSeng") return EquityMarket::HangSeng;
    if (text == "FTSE100") return EquityMarket::FTSE100;
    return std::nullopt;
}

Date parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        fail(ErrorCode::InvalidArgument, "bad date '" + std::string(text) + "'");
    }
    const int y = parse_int<int>(text.substr(0, 4), "year");
    const auto m = parse_int<unsigned>(text.substr(5, 2), "month");
    const auto d = parse_int<unsigned>(text.substr(8, 2), "day");
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) fail(ErrorCode::InvalidArgument, "invalid calendar date '" + std::string(text) + "'");
    return Date{ymd};
}

std::string format_date(Date date) {
    const std::chrono::year_month_day ymd{date};
    std::array<char, 16> buf{};
    std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return std::string(buf.data());
}

Half parse_half(std::string_view text) {
    if (text == "H1") return Half::H1;
    if (text == "H2") return Half::H2;
    fail(ErrorCode::InvalidArgument, "bad half '" + std::string(text) + "'");
}

Instant parse_rfc3339(std::string_view text) {
    // YYYY-MM-DDTHH:MM:SS[.fff...](Z|+hh:mm|-hh:mm)
    if (text.size() < 20 || (text[10] != 'T' && text[10] != 't' && text[10] != ' ') || text[13] != ':' ||
        text[16] != ':') {
        fail(ErrorCode::InvalidArgument, "bad timestamp '" + std::string(text) + "'");
    }
    const Date date = parse_date(text.substr(0, 10));
    const int hh = parse_int<int>(text.substr(11, 2), "hour");
    const int mm = parse_int<int>(text.substr(14, 2), "minute");
    const int ss = parse_int<int>(text.substr(17, 2), "second");
    if (hh > 23 || mm > 59 || ss > 60) fail(ErrorCode::InvalidArgument, "bad time in '" + std::string(text) + "'");

    std::size_t pos = 19;
    std::int64_t millis = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        int digits = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            if (digits < 3) millis = millis * 10 + (text[pos] - '0');
            ++digits;
            ++pos;
        }
        if (digits == 0) fail(ErrorCode::InvalidArgument, "bad fraction in '" + std::string(text) + "'");
        for (int i = digits; i < 3; ++i) millis *= 10;
    }
    std::int64_t offset_minutes = 0;
    const std::string_view zone = text.substr(pos);
    if (zone == "Z" || zone == "z") {
        offset_minutes = 0;
    } else if (zone.size() == 6 && (zone[0] == '+' || zone[0] == '-') && zone[3] == ':') {
        const int oh = parse_int<int>(zone.substr(1, 2), "offset hour");
        const int om = parse_int<int>(zone.substr(4, 2), "offset minute");
        offset_minutes = (zone[0] == '-' ? -1 : 1) * (oh * 60 + om);
    } else {
        fail(ErrorCode::InvalidArgument, "bad zone in '" + std::string(text) + "'");
    }
    Instant ts{date};
    ts += std::chrono::hours{hh} + std::chrono::minutes{mm} + std::chrono::seconds{ss} +
          std::chrono::milliseconds{millis};
    ts -= std::chrono::minutes{offset_minutes};
    return ts;
}

std::string format_rfc3339(Instant ts) {
    const auto day = std::chrono::floor<std::chrono::days>(ts);
    const std::chrono::hh_mm_ss hms{ts - day};
    std::array<char, 40> buf{};
    const auto ms = hms.subseconds().count();
    if (ms == 0) {
        std::snprintf(buf.data(), buf.size(), "%sT%02d:%02d:%02dZ", format_date(Date{day}).c_str(),
                      static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                      static_cast<int>(hms.seconds().count()));
    } else {
        std::snprintf(buf.data(), buf.size(), "%sT%02d:%02d:%02d.%03dZ", format_date(Date{day}).c_str(),
                      static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                      static_cast<int>(hms.seconds().count()), static_cast<int>(ms));
    }
    return std::string(buf.data());
}

bool is_weekend(Date date) noexcept {
    const std::chrono::weekday wd{date};
    return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

}  // namespace chainspill

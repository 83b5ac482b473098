#include "chainspill/ingest.hpp"

#include "chainspill/error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <variant>

namespace chainspill::ingest {

namespace {

using boost::multiprecision::cpp_int;

constexpr std::size_t kWordHex = 64;

int hex_digit(char c) noexcept {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

// One ABI word as a signed integer (two's complement over 256 bits).
std::optional<cpp_int> decode_int256(std::string_view word) {
    if (word.size() != kWordHex) return std::nullopt;
    cpp_int v = 0;
    for (char c : word) {
        const int d = hex_digit(c);
        if (d < 0) return std::nullopt;
        v = (v << 4) | d;
    }
    if (hex_digit(word.front()) >= 8) v -= cpp_int(1) << 256;
    return v;
}

double scale_amount(const cpp_int& magnitude, int decimals) {
    const cpp_int unit = boost::multiprecision::pow(cpp_int(10), decimals);
    const cpp_int whole = magnitude / unit;
    const cpp_int frac = magnitude % unit;
    return whole.convert_to<double>() + frac.convert_to<double>() / unit.convert_to<double>();
}

struct ParsedEvent {
    std::string pool_id;
    Instant ts;
    cpp_int amount0;
    cpp_int amount1;
};

// Returns an error message on failure.
std::variant<ParsedEvent, std::string> parse_event(std::string_view record) {
    const auto fields = io::split(io::trim(record), ',');
    if (fields.size() != 3) return std::string("expected 3 fields, got ") + std::to_string(fields.size());
    ParsedEvent ev;
    ev.pool_id = std::string(io::trim(fields[0]));
    if (ev.pool_id.empty()) return std::string("empty pool id");
    try {
        ev.ts = parse_rfc3339(io::trim(fields[1]));
    } catch (const Error& e) {
        return std::string(e.what());
    }
    auto data = io::trim(fields[2]);
    if (data.starts_with("0x") || data.starts_with("0X")) data.remove_prefix(2);
    if (data.size() != 2 * kWordHex) {
        return "payload has " + std::to_string(data.size()) + " hex digits, expected " + std::to_string(2 * kWordHex);
    }
    auto a0 = decode_int256(data.substr(0, kWordHex));
    auto a1 = decode_int256(data.substr(kWordHex));
    if (!a0 || !a1) return std::string("non-hex payload");
    ev.amount0 = std::move(*a0);
    ev.amount1 = std::move(*a1);
    return ev;
}

}  // namespace

DecodeResult decode_swap_events(std::span<const std::string> records, const PoolMeta& pool, DecodePolicy policy) {
    DecodeResult out;
    std::optional<Instant> last_ts;
    for (std::size_t i = 0; i < records.size(); ++i) {
        auto report = [&](ErrorCode code, const std::string& why) {
            if (policy == DecodePolicy::Strict) {
                fail(code, "record " + std::to_string(i) + ": " + why);
            }
            out.issues.push_back({i, why});
        };

        auto parsed = parse_event(records[i]);
        if (auto* err = std::get_if<std::string>(&parsed)) {
            report(ErrorCode::MalformedEvent, *err);
            continue;
        }
        auto& ev = std::get<ParsedEvent>(parsed);
        if (ev.pool_id != pool.pool_id) {
            if (policy == DecodePolicy::Strict) {
                fail(ErrorCode::UnknownPool, "record " + std::to_string(i) + ": pool '" + ev.pool_id + "'");
            }
            continue;
        }
        const cpp_int& base = pool.base_is_token0 ? ev.amount0 : ev.amount1;
        const cpp_int& quote = pool.base_is_token0 ? ev.amount1 : ev.amount0;
        if (base == 0 || quote == 0 || (base > 0) == (quote > 0)) {
            report(ErrorCode::MalformedEvent, "amounts must be non-zero with opposite signs");
            continue;
        }
        if (last_ts && ev.ts < *last_ts) {
            report(ErrorCode::MalformedEvent, "timestamp goes backwards");
            continue;
        }
        last_ts = ev.ts;
        SwapTrade trade;
        trade.pool_id = ev.pool_id;
        trade.ts = ev.ts;
        trade.base_amount = scale_amount(abs(base), pool.base_decimals);
        trade.quote_amount = scale_amount(abs(quote), pool.quote_decimals);
        // The pool paid out base: the trader bought it.
        trade.direction = base < 0 ? Direction::Buy : Direction::Sell;
        if (!(trade.base_amount > 0.0) || !(trade.quote_amount > 0.0)) {
            report(ErrorCode::MalformedEvent, "amount underflows to zero after scaling");
            continue;
        }
        out.trades.push_back(std::move(trade));
    }
    return out;
}

std::vector<std::string> read_swap_event_log(const std::filesystem::path& path) {
    const auto text = io::read_file(path);
    const auto all = io::lines(text);
    if (all.empty() || io::trim(all.front()) != "# swap-events v1") {
        fail(ErrorCode::SchemaMismatch, path.string() + ": expected header '# swap-events v1'");
    }
    std::vector<std::string> out;
    for (std::size_t i = 1; i < all.size(); ++i) {
        if (!io::trim(all[i]).empty()) out.emplace_back(all[i]);
    }
    return out;
}

std::vector<PoolMeta> read_pools_csv(const std::filesystem::path& path) {
    const auto table = io::read_csv(path, "pool_id,asset_id,base_is_token0,base_decimals,quote_decimals");
    std::vector<PoolMeta> out;
    for (const auto& row : table.rows) {
        PoolMeta m;
        m.pool_id = row[0];
        m.asset_id = row[1];
        m.base_is_token0 = row[2] == "1" || row[2] == "true";
        m.base_decimals = std::stoi(row[3]);
        m.quote_decimals = std::stoi(row[4]);
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<SwapTrade> parse_swaps_csv(std::string_view text, std::string_view origin) {
    const auto table = io::parse_csv(text, "pool_id,ts,base_amount,quote_amount,direction", origin);
    std::vector<SwapTrade> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        SwapTrade t;
        t.pool_id = row[0];
        t.ts = parse_rfc3339(row[1]);
        t.base_amount = io::parse_double(row[2]);
        t.quote_amount = io::parse_double(row[3]);
        if (row[4] == "buy") {
            t.direction = Direction::Buy;
        } else if (row[4] == "sell") {
            t.direction = Direction::Sell;
        } else {
            fail(ErrorCode::SchemaMismatch, std::string(origin) + ": bad direction '" + row[4] + "'");
        }
        if (!(t.base_amount > 0.0) || !(t.quote_amount > 0.0)) {
            fail(ErrorCode::SchemaMismatch, std::string(origin) + ": non-positive amount for pool " + t.pool_id);
        }
        out.push_back(std::move(t));
    }
    return out;
}

std::string format_swaps_csv(std::span<const SwapTrade> trades) {
    std::string out = "pool_id,ts,base_amount,quote_amount,direction\n";
    for (const auto& t : trades) {
        out += t.pool_id + "," + format_rfc3339(t.ts) + "," + io::format_double(t.base_amount) + "," +
               io::format_double(t.quote_amount) + "," + (t.direction == Direction::Buy ? "buy" : "sell") + "\n";
    }
    return out;
}

Series reconstruct_price_series(std::span<const SwapTrade> trades, const HalfDayRange& grid,
                                std::int64_t staleness_limit, std::string series_id) {
    if (grid.empty()) fail(ErrorCode::InvalidArgument, "reconstruct_price_series: empty grid");
    if (staleness_limit < 0) fail(ErrorCode::InvalidArgument, "negative staleness limit");
    for (std::size_t i = 1; i < trades.size(); ++i) {
        if (trades[i].ts < trades[i - 1].ts) fail(ErrorCode::InvalidArgument, "trades not sorted by timestamp");
    }

    Series out(std::move(series_id), grid);
    std::size_t next = 0;
    std::optional<double> last_price;
    std::int64_t last_traded = 0;  // ordinal of the half-day of the last trade
    bool any = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const HalfDayId t = grid[i];
        const Instant end = t.next().start();
        while (next < trades.size() && trades[next].ts < end) {
            last_price = trades[next].price();
            last_traded = half_day_index(trades[next].ts).ordinal();
            ++next;
        }
        if (!last_price) continue;
        const std::int64_t elapsed = t.ordinal() - last_traded - 1;  // whole half-days since the traded one ended
        if (elapsed <= staleness_limit) {
            out.set_index(i, *last_price);
            any = true;
        }
    }
    if (!any) fail(ErrorCode::NoTrades, "no trade prices any half-day of " + grid.first().to_string() + ".." +
                                            grid.last().to_string());
    return out;
}

std::string_view to_string(CapSource s) noexcept {
    switch (s) {
        case CapSource::ProviderA: return "providerA";
        case CapSource::ProviderB: return "providerB";
        case CapSource::Computed: return "computed";
    }
    return "?";
}

std::optional<CapSource> parse_cap_source(std::string_view text) noexcept {
    if (text == "providerA") return CapSource::ProviderA;
    if (text == "providerB") return CapSource::ProviderB;
    if (text == "computed") return CapSource::Computed;
    return std::nullopt;
}

Series merge_market_cap(std::span<const RawCapObservation> observations) {
    if (observations.empty()) return Series{};
    const std::string& asset = observations.front().asset_id;
    std::map<HalfDayId, std::array<double, 3>> by_half;
    for (const auto& o : observations) {
        if (o.asset_id != asset) fail(ErrorCode::InvalidArgument, "merge_market_cap: mixed assets");
        if (!(o.cap >= 0.0)) fail(ErrorCode::InvalidArgument, "negative market cap for " + asset);
        auto [it, inserted] = by_half.try_emplace(o.half_day);
        if (inserted) it->second.fill(kMissing);
        double& slot = it->second[static_cast<std::size_t>(o.source)];
        if (!is_missing(slot)) {
            fail(ErrorCode::SchemaMismatch, "duplicate cap for " + asset + " at " + o.half_day.to_string() + " from " +
                                                std::string(to_string(o.source)));
        }
        slot = o.cap;
    }
    Series out(asset, HalfDayRange::between(by_half.begin()->first, by_half.rbegin()->first));
    for (const auto& [t, caps] : by_half) {
        double sum = 0.0;
        int n = 0;
        for (double c : caps) {
            if (is_missing(c)) continue;
            sum += c;
            ++n;
        }
        if (n > 0) out.set(t, sum / n);
    }
    return out;
}

std::vector<RawCapObservation> parse_caps_csv(std::string_view text, std::string_view origin) {
    const auto table = io::parse_csv(text, "asset_id,date,half,source,cap", origin);
    std::vector<RawCapObservation> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        RawCapObservation o;
        o.asset_id = row[0];
        o.half_day = HalfDayId{parse_date(row[1]), parse_half(row[2])};
        const auto src = parse_cap_source(row[3]);
        if (!src) fail(ErrorCode::SchemaMismatch, std::string(origin) + ": unknown source '" + row[3] + "'");
        o.source = *src;
        o.cap = io::parse_double(row[4]);
        out.push_back(std::move(o));
    }
    return out;
}

std::string format_caps_csv(std::span<const RawCapObservation> observations) {
    std::string out = "asset_id,date,half,source,cap\n";
    for (const auto& o : observations) {
        out += o.asset_id + "," + format_date(o.half_day.date) + "," + std::string(to_string(o.half_day.half)) + "," +
               std::string(to_string(o.source)) + "," + io::format_double(o.cap) + "\n";
    }
    return out;
}

SeriesStore parse_series_csv(std::string_view text, std::string_view origin) {
    const auto table = io::parse_csv(text, "series_id,date,half,value", origin);
    SeriesStore store;
    for (const auto& row : table.rows) {
        SeriesPoint p;
        p.date = parse_date(row[1]);
        if (row[2] != "D") p.half = parse_half(row[2]);
        p.value = io::parse_double(row[3]);
        store[row[0]].push_back(p);
    }
    for (auto& [id, points] : store) {
        std::stable_sort(points.begin(), points.end(), [](const SeriesPoint& a, const SeriesPoint& b) {
            const auto ka = std::pair{a.date, a.half ? static_cast<int>(*a.half) : -1};
            const auto kb = std::pair{b.date, b.half ? static_cast<int>(*b.half) : -1};
            return ka < kb;
        });
    }
    return store;
}

std::string format_series_csv(const SeriesStore& store) {
    std::string out = "series_id,date,half,value\n";
    for (const auto& [id, points] : store) {
        for (const auto& p : points) {
            out += id + "," + format_date(p.date) + "," + (p.half ? std::string(to_string(*p.half)) : "D") + "," +
                   io::format_double(p.value) + "\n";
        }
    }
    return out;
}

Series to_half_day_series(const std::string& id, std::span<const SeriesPoint> points) {
    if (points.empty()) return Series(id, HalfDayRange{});
    HalfDayId lo{}, hi{};
    bool first = true;
    for (const auto& p : points) {
        if (!p.half) fail(ErrorCode::SchemaMismatch, "series '" + id + "' mixes daily and half-day points");
        const HalfDayId t{p.date, *p.half};
        if (first || t < lo) lo = t;
        if (first || hi < t) hi = t;
        first = false;
    }
    Series out(id, HalfDayRange::between(lo, hi));
    for (const auto& p : points) out.set(HalfDayId{p.date, *p.half}, p.value);
    return out;
}

std::map<Date, double> to_daily(const std::string& id, std::span<const SeriesPoint> points) {
    std::map<Date, double> out;
    for (const auto& p : points) {
        if (p.half) fail(ErrorCode::SchemaMismatch, "series '" + id + "' expected daily points");
        out[p.date] = p.value;
    }
    return out;
}

}  // namespace chainspill::ingest

#pragma once

#include "chainspill/io.hpp"
#include "chainspill/series.hpp"
#include "chainspill/timebase.hpp"
#include "chainspill/universe.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chainspill::ingest {

// ---------------------------------------------------------------------------
// DEX swaps
// ---------------------------------------------------------------------------

enum class Direction : std::uint8_t { Buy, Sell };  // from the trader's side, on the base asset

struct SwapTrade {
    std::string pool_id;
    Instant ts{};
    double base_amount = 0.0;   // human units of the asset
    double quote_amount = 0.0;  // human units of the paired native token
    Direction direction = Direction::Buy;

    [[nodiscard]] double price() const noexcept { return quote_amount / base_amount; }
};

/// Token ordering and amount scaling of one pool. Raw amounts are integers in
/// the token's smallest unit; `*_decimals` gives the power of ten per unit.
struct PoolMeta {
    std::string pool_id;
    std::string asset_id;
    bool base_is_token0 = true;
    int base_decimals = 18;
    int quote_decimals = 18;
};

enum class DecodePolicy : std::uint8_t { Lenient, Strict };

struct DecodeIssue {
    std::size_t record_index = 0;
    std::string reason;
};

struct DecodeResult {
    std::vector<SwapTrade> trades;
    std::vector<DecodeIssue> issues;  // lenient mode only
};

/// Decodes raw swap-event records of the form `pool_id,ts,0x<amount0><amount1>`
/// where both amounts are 32-byte big-endian two's-complement pool deltas
/// (positive = paid into the pool). Events of other pools are skipped
/// (UnknownPool in strict mode); unparseable records raise MalformedEvent with
/// their index in strict mode and are reported as issues in lenient mode.
[[nodiscard]] DecodeResult decode_swap_events(std::span<const std::string> records, const PoolMeta& pool,
                                              DecodePolicy policy);

/// Splits a `swap_events.log` file (header line `# swap-events v1`) into records.
[[nodiscard]] std::vector<std::string> read_swap_event_log(const std::filesystem::path& path);

/// `pools.csv`: `pool_id,asset_id,base_is_token0,base_decimals,quote_decimals`.
[[nodiscard]] std::vector<PoolMeta> read_pools_csv(const std::filesystem::path& path);

/// `swaps.csv`: `pool_id,ts,base_amount,quote_amount,direction`.
[[nodiscard]] std::vector<SwapTrade> parse_swaps_csv(std::string_view text, std::string_view origin = "swaps.csv");
[[nodiscard]] std::string format_swaps_csv(std::span<const SwapTrade> trades);

inline constexpr std::int64_t kDefaultStalenessLimit = 4;

/// Last-trade price per half-day (quote per base, native-token denominated).
/// Untraded half-days carry the previous price while no more than
/// `staleness_limit` whole half-days have elapsed since the traded half-day
/// ended; later ones are missing. Throws NoTrades if nothing in `grid` is priced.
[[nodiscard]] Series reconstruct_price_series(std::span<const SwapTrade> trades, const HalfDayRange& grid,
                                              std::int64_t staleness_limit = kDefaultStalenessLimit,
                                              std::string series_id = "price");

// ---------------------------------------------------------------------------
// Market capitalisation
// ---------------------------------------------------------------------------

enum class CapSource : std::uint8_t { ProviderA = 0, ProviderB = 1, Computed = 2 };

[[nodiscard]] std::string_view to_string(CapSource s) noexcept;
[[nodiscard]] std::optional<CapSource> parse_cap_source(std::string_view text) noexcept;

struct RawCapObservation {
    std::string asset_id;
    HalfDayId half_day;
    CapSource source = CapSource::ProviderA;
    double cap = 0.0;
};

/// Per half-day arithmetic mean over the sources present. The sum is taken
/// in source order, so the result does not depend on input ordering.
[[nodiscard]] Series merge_market_cap(std::span<const RawCapObservation> observations);

/// `caps.csv`: `asset_id,date,half,source,cap`.
[[nodiscard]] std::vector<RawCapObservation> parse_caps_csv(std::string_view text, std::string_view origin = "caps.csv");
[[nodiscard]] std::string format_caps_csv(std::span<const RawCapObservation> observations);

// ---------------------------------------------------------------------------
// Generic series files
// ---------------------------------------------------------------------------

struct SeriesPoint {
    Date date{};
    std::optional<Half> half;  // nullopt for daily observations ("D")
    double value = 0.0;
};

using SeriesStore = std::map<std::string, std::vector<SeriesPoint>>;

/// `series.csv`: `series_id,date,half,value`, half in {H1, H2, D}.
[[nodiscard]] SeriesStore parse_series_csv(std::string_view text, std::string_view origin = "series.csv");
[[nodiscard]] std::string format_series_csv(const SeriesStore& store);

/// Half-day observations as a Series over their hull (daily points rejected).
[[nodiscard]] Series to_half_day_series(const std::string& id, std::span<const SeriesPoint> points);
/// Daily observations by date (half-day points rejected).
[[nodiscard]] std::map<Date, double> to_daily(const std::string& id, std::span<const SeriesPoint> points);

// ---------------------------------------------------------------------------
// Sources
// ---------------------------------------------------------------------------

enum class SourceKind : std::uint8_t { FixtureFile, HttpEndpoint };

struct SourceDescriptor {
    SourceKind kind = SourceKind::FixtureFile;
    std::string name;  // used for CHAINSPILL_API_KEY_<NAME>
    std::string uri;   // file path, or http://host:port/path
    std::optional<std::string> credentials;
    double rate_limit = 0.0;  // requests per second, 0 = unlimited

    /// Fills credentials from CHAINSPILL_API_KEY_<NAME> when not set explicitly.
    [[nodiscard]] SourceDescriptor with_env_credentials() const;
};

/// Uniform paged transport. Payload decoding is done by the caller.
class SourceClient {
public:
    virtual ~SourceClient() = default;
    /// Raw payload of page `page` (0-based), or nullopt past the last page.
    [[nodiscard]] virtual std::optional<std::string> request(std::size_t page) = 0;
};

[[nodiscard]] std::unique_ptr<SourceClient> open_source(const SourceDescriptor& source);

/// Decodes `assets.jsonl` content (or a JSON array of the same objects).
[[nodiscard]] std::vector<AssetRecord> parse_assets(std::string_view payload, std::string_view origin = "assets");
[[nodiscard]] std::string format_assets_jsonl(std::span<const AssetRecord> records);

/// Pulls every page of `source`, decodes asset metadata, derives multi-chain
/// flags across all chains in the payload, and returns the records of `chain`.
[[nodiscard]] std::vector<AssetRecord> fetch_universe(const SourceDescriptor& source, Chain chain);
/// Same, without the chain filter.
[[nodiscard]] std::vector<AssetRecord> fetch_universe_all(const SourceDescriptor& source);

}  // namespace chainspill::ingest

#pragma once

#include "chainspill/io.hpp"
#include "chainspill/timebase.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace chainspill {

enum class Chain : std::uint8_t { Ethereum = 0, Solana, BSC, Arbitrum, Avalanche };

inline constexpr std::array<Chain, 5> kAllChains{Chain::Ethereum, Chain::Solana, Chain::BSC, Chain::Arbitrum,
                                                 Chain::Avalanche};

[[nodiscard]] std::string_view to_string(Chain chain) noexcept;
[[nodiscard]] std::optional<Chain> parse_chain(std::string_view text) noexcept;
/// Ticker of the chain's native token ("ETH", "SOL", "BNB", "ARB", "AVAX").
[[nodiscard]] std::string_view native_token(Chain chain) noexcept;
/// The four other chains, in canonical order.
[[nodiscard]] std::array<Chain, 4> rivals(Chain chain) noexcept;

enum class ExclusionClass : std::uint8_t { None, LiquidStaking, WrappedNative, Stablecoin };

[[nodiscard]] std::string_view to_string(ExclusionClass c) noexcept;
/// Accepts the canonical names plus the common tag spellings ("stable", "lst", ...).
[[nodiscard]] std::optional<ExclusionClass> parse_exclusion(std::string_view text) noexcept;

enum class PortfolioKind : std::uint8_t { All = 0, CEX, NonCEX, Local };

inline constexpr std::array<PortfolioKind, 4> kAllKinds{PortfolioKind::All, PortfolioKind::CEX, PortfolioKind::NonCEX,
                                                        PortfolioKind::Local};

[[nodiscard]] std::string_view to_string(PortfolioKind kind) noexcept;
[[nodiscard]] std::optional<PortfolioKind> parse_portfolio_kind(std::string_view text) noexcept;

struct AssetRecord {
    std::string asset_id;
    std::string logical_id;  // shared by the bridged copies of one asset
    Chain chain = Chain::Ethereum;
    std::string address;
    std::string symbol;
    std::optional<Date> cex_listing_date;
    std::vector<std::string> tags;
    ExclusionClass exclusion = ExclusionClass::None;
    bool multi_chain = false;

    friend bool operator==(const AssetRecord&, const AssetRecord&) = default;
};

/// Sets `multi_chain` on every record whose logical id appears on two or more chains.
void mark_multi_chain(std::vector<AssetRecord>& records);

/// Applies `exclusion.<class> = [asset_id, ...]` overrides from the config.
/// Returns the number of records changed.
std::size_t apply_exclusion_overrides(std::vector<AssetRecord>& records, const io::Config& config);

using AssetSet = std::set<std::string>;

/// Portfolio memberships for every chain at one half-day.
class Membership {
public:
    [[nodiscard]] const AssetSet& get(Chain chain, PortfolioKind kind) const noexcept {
        return sets_[static_cast<std::size_t>(chain)][static_cast<std::size_t>(kind)];
    }
    AssetSet& get(Chain chain, PortfolioKind kind) noexcept {
        return sets_[static_cast<std::size_t>(chain)][static_cast<std::size_t>(kind)];
    }

    friend bool operator==(const Membership&, const Membership&) = default;

private:
    std::array<std::array<AssetSet, 4>, 5> sets_{};
};

struct ClassifyOptions {
    /// When set, CEX status is evaluated at this half-day instead of `as_of`.
    std::optional<HalfDayId> freeze_cex_at;
};

/// All = non-excluded assets on the chain; CEX = All with a listing date on or
/// before the as_of date; nonCEX = All \ CEX; Local = All \ multi-chain assets.
[[nodiscard]] Membership classify(const std::vector<AssetRecord>& records, HalfDayId as_of,
                                  const ClassifyOptions& options = {});

/// classify() evaluated at every half-day of `grid`.
[[nodiscard]] std::vector<Membership> membership_timeline(const std::vector<AssetRecord>& records,
                                                          const HalfDayRange& grid,
                                                          const ClassifyOptions& options = {});

}  // namespace chainspill

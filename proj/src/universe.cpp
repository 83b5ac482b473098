#include "chainspill/universe.hpp"

#include "chainspill/error.hpp"

#include <map>

namespace chainspill {

std::string_view to_string(Chain chain) noexcept {
    switch (chain) {
        case Chain::Ethereum: return "Ethereum";
        case Chain::Solana: return "Solana";
        case Chain::BSC: return "BSC";
        case Chain::Arbitrum: return "Arbitrum";
        case Chain::Avalanche: return "Avalanche";
    }
    return "?";
}

std::optional<Chain> parse_chain(std::string_view text) noexcept {
    for (Chain c : kAllChains) {
        if (to_string(c) == text) return c;
    }
    return std::nullopt;
}

std::string_view native_token(Chain chain) noexcept {
    switch (chain) {
        case Chain::Ethereum: return "ETH";
        case Chain::Solana: return "SOL";
        case Chain::BSC: return "BNB";
        case Chain::Arbitrum: return "ARB";
        case Chain::Avalanche: return "AVAX";
    }
    return "?";
}

std::array<Chain, 4> rivals(Chain chain) noexcept {
    std::array<Chain, 4> out{};
    std::size_t n = 0;
    for (Chain c : kAllChains) {
        if (c != chain) out[n++] = c;
    }
    return out;
}

std::string_view to_string(ExclusionClass c) noexcept {
    switch (c) {
        case ExclusionClass::None: return "none";
        case ExclusionClass::LiquidStaking: return "liquid_staking";
        case ExclusionClass::WrappedNative: return "wrapped_native";
        case ExclusionClass::Stablecoin: return "stablecoin";
    }
    return "?";
}

std::optional<ExclusionClass> parse_exclusion(std::string_view text) noexcept {
    if (text == "none") return ExclusionClass::None;
    if (text == "liquid_staking" || text == "lst" || text == "restaking" || text == "liquid_restaking") {
        return ExclusionClass::LiquidStaking;
    }
    if (text == "wrapped_native" || text == "wrapped") return ExclusionClass::WrappedNative;
    if (text == "stablecoin" || text == "stable") return ExclusionClass::Stablecoin;
    return std::nullopt;
}

std::string_view to_string(PortfolioKind kind) noexcept {
    switch (kind) {
        case PortfolioKind::All: return "All";
        case PortfolioKind::CEX: return "CEX";
        case PortfolioKind::NonCEX: return "nonCEX";
        case PortfolioKind::Local: return "Local";
    }
    return "?";
}

std::optional<PortfolioKind> parse_portfolio_kind(std::string_view text) noexcept {
    for (PortfolioKind k : kAllKinds) {
        if (to_string(k) == text) return k;
    }
    return std::nullopt;
}

void mark_multi_chain(std::vector<AssetRecord>& records) {
    std::map<std::string, std::set<Chain>> chains_by_logical;
    for (const auto& r : records) chains_by_logical[r.logical_id].insert(r.chain);
    for (auto& r : records) r.multi_chain = chains_by_logical[r.logical_id].size() >= 2;
}

std::size_t apply_exclusion_overrides(std::vector<AssetRecord>& records, const io::Config& config) {
    std::size_t changed = 0;
    for (const auto& [name, value] : config.section("exclusion")) {
        const auto cls = parse_exclusion(name);
        if (!cls) fail(ErrorCode::InvalidArgument, "unknown exclusion class '" + name + "'");
        const auto ids = io::parse_list(value);
        const AssetSet wanted(ids.begin(), ids.end());
        for (auto& r : records) {
            if (wanted.contains(r.asset_id) && r.exclusion != *cls) {
                r.exclusion = *cls;
                ++changed;
            }
        }
    }
    return changed;
}

Membership classify(const std::vector<AssetRecord>& records, HalfDayId as_of, const ClassifyOptions& options) {
    Membership m;
    const Date cex_date = options.freeze_cex_at ? options.freeze_cex_at->date : as_of.date;
    for (const auto& r : records) {
        if (r.exclusion != ExclusionClass::None) continue;
        m.get(r.chain, PortfolioKind::All).insert(r.asset_id);
        // Listing dates are day-granular: effective from H1 of the listing date.
        const bool listed = r.cex_listing_date && *r.cex_listing_date <= cex_date;
        m.get(r.chain, listed ? PortfolioKind::CEX : PortfolioKind::NonCEX).insert(r.asset_id);
        if (!r.multi_chain) m.get(r.chain, PortfolioKind::Local).insert(r.asset_id);
    }
    return m;
}

std::vector<Membership> membership_timeline(const std::vector<AssetRecord>& records, const HalfDayRange& grid,
                                            const ClassifyOptions& options) {
    std::vector<Membership> out;
    out.reserve(grid.size());
    for (HalfDayId t : grid) {
        // Membership only changes on listing dates; reuse the H1 result for H2.
        if (t.half == Half::H2 && !out.empty()) {
            out.push_back(out.back());
        } else {
            out.push_back(classify(records, t, options));
        }
    }
    return out;
}

}  // namespace chainspill

#pragma once

#include "chainspill/series.hpp"
#include "chainspill/universe.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace chainspill {

/// r_t = ln(p_t / p_{t-1}) over the price coverage; missing when either side
/// is missing (the first point is always missing). Throws NonPositivePrice.
[[nodiscard]] ReturnSeries log_return(const Series& prices, std::string id = {});

/// Cap-weighted mean of member returns: w_i = cap_i / sum(caps) over assets that
/// have both a return and a cap. Throws EmptyPortfolio when no asset is eligible
/// or every eligible cap is zero.
[[nodiscard]] double portfolio_return(const std::map<std::string, double>& member_returns,
                                      const std::map<std::string, double>& caps);

struct WeightEntry {
    std::string asset_id;
    double weight = 0.0;
    friend bool operator==(const WeightEntry&, const WeightEntry&) = default;
};

/// The four portfolio return series of one chain plus the weights used.
struct ChainPanel {
    Chain chain = Chain::Ethereum;
    std::array<ReturnSeries, 4> series;  // indexed by PortfolioKind
    /// weight_log[kind][i] = weights applied at grid point i.
    std::array<std::vector<std::vector<WeightEntry>>, 4> weight_log;

    [[nodiscard]] const ReturnSeries& get(PortfolioKind kind) const noexcept {
        return series[static_cast<std::size_t>(kind)];
    }
    [[nodiscard]] ReturnSeries& get(PortfolioKind kind) noexcept { return series[static_cast<std::size_t>(kind)]; }
};

using PanelSet = std::map<Chain, ChainPanel>;

/// Builds the All/CEX/nonCEX/Local series of `chain` over `grid`.
/// `memberships[i]` is the classification at grid[i]. Weights use the cap at
/// t-1; assets lacking a return at t or a cap at t-1 are dropped for that
/// half-day and the rest renormalised. Half-days with no member are marked
/// EmptyPortfolio, ones whose members all lack data are marked Missing.
[[nodiscard]] ChainPanel build_chain_panel(Chain chain, const std::vector<Membership>& memberships,
                                           const std::map<std::string, Series>& prices,
                                           const std::map<std::string, Series>& caps, const HalfDayRange& grid);

[[nodiscard]] std::string panel_series_id(Chain chain, PortfolioKind kind);

/// `panel.csv`: `chain,kind,date,half,value,missing_flag` (flag 0 present,
/// 1 missing input, 2 empty portfolio).
[[nodiscard]] std::string format_panel_csv(const PanelSet& panels);
[[nodiscard]] PanelSet parse_panel_csv(std::string_view text, std::string_view origin = "panel.csv");

}  // namespace chainspill

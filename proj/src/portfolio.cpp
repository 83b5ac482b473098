#include "chainspill/portfolio.hpp"

#include "chainspill/error.hpp"
#include "chainspill/io.hpp"
#include "chainspill/kernels.hpp"

#include <cmath>

namespace chainspill {

ReturnSeries log_return(const Series& prices, std::string id) {
    ReturnSeries out(id.empty() ? prices.id() : std::move(id), prices.coverage());
    for (std::size_t i = 0; i < prices.size(); ++i) {
        const double p = prices.value(i);
        if (!is_missing(p) && !(p > 0.0)) {
            fail(ErrorCode::NonPositivePrice, "series '" + prices.id() + "' at " + prices.coverage()[i].to_string());
        }
        if (i == 0 || is_missing(p)) continue;
        const double prev = prices.value(i - 1);
        if (is_missing(prev)) continue;
        out.set_index(i, std::log(p / prev));
    }
    return out;
}

double portfolio_return(const std::map<std::string, double>& member_returns, const std::map<std::string, double>& caps) {
    double total = 0.0;
    bool eligible = false;
    for (const auto& [id, r] : member_returns) {
        const auto it = caps.find(id);
        if (it == caps.end() || is_missing(it->second) || is_missing(r)) continue;
        if (it->second < 0.0) fail(ErrorCode::InvalidArgument, "negative cap for " + id);
        total += it->second;
        eligible = true;
    }
    if (!eligible) fail(ErrorCode::EmptyPortfolio, "no asset has both a return and a cap");
    if (!(total > 0.0)) fail(ErrorCode::EmptyPortfolio, "all eligible caps are zero");
    double acc = 0.0;
    for (const auto& [id, r] : member_returns) {
        const auto it = caps.find(id);
        if (it == caps.end() || is_missing(it->second) || is_missing(r)) continue;
        acc += (it->second / total) * r;
    }
    return acc;
}

std::string panel_series_id(Chain chain, PortfolioKind kind) {
    return "R_" + std::string(to_string(kind)) + "_" + std::string(to_string(chain));
}

ChainPanel build_chain_panel(Chain chain, const std::vector<Membership>& memberships,
                             const std::map<std::string, Series>& prices, const std::map<std::string, Series>& caps,
                             const HalfDayRange& grid) {
    if (memberships.size() != grid.size()) {
        fail(ErrorCode::InvalidArgument, "membership timeline does not match the grid");
    }

    // Column set: every asset that is ever an All-member of this chain (sorted by id).
    AssetSet universe;
    for (const auto& m : memberships) {
        const auto& all = m.get(chain, PortfolioKind::All);
        universe.insert(all.begin(), all.end());
    }
    const std::vector<std::string> ids(universe.begin(), universe.end());

    kernels::PortfolioMatrices base;
    base.periods = grid.size();
    base.assets = ids.size();
    base.returns.assign(base.periods * base.assets, kMissing);
    base.caps_prev.assign(base.periods * base.assets, kMissing);
    for (std::size_t a = 0; a < ids.size(); ++a) {
        const auto p = prices.find(ids[a]);
        const auto c = caps.find(ids[a]);
        const ReturnSeries rets = p != prices.end() ? log_return(p->second) : ReturnSeries{};
        for (std::size_t t = 0; t < grid.size(); ++t) {
            base.returns[base.at(t, a)] = rets.at(grid[t]);
            if (c != caps.end()) base.caps_prev[base.at(t, a)] = c->second.at(grid[t].prev());
        }
    }

    ChainPanel panel;
    panel.chain = chain;
    for (PortfolioKind kind : kAllKinds) {
        kernels::PortfolioMatrices m = base;
        m.member.assign(m.periods * m.assets, 0);
        for (std::size_t t = 0; t < grid.size(); ++t) {
            const auto& set = memberships[t].get(chain, kind);
            for (std::size_t a = 0; a < ids.size(); ++a) m.member[m.at(t, a)] = set.contains(ids[a]) ? 1 : 0;
        }
        const auto result = kernels::weighted_returns_omp(m);

        auto& series = panel.get(kind);
        series = ReturnSeries(panel_series_id(chain, kind), grid);
        auto& log = panel.weight_log[static_cast<std::size_t>(kind)];
        log.assign(grid.size(), {});
        for (std::size_t t = 0; t < grid.size(); ++t) {
            if (result.status[t] == PointStatus::Present) {
                series.set_index(t, result.value[t]);
                double total = 0.0;
                for (std::size_t a = 0; a < ids.size(); ++a) {
                    const std::size_t k = m.at(t, a);
                    if (m.member[k] && !is_missing(m.returns[k]) && !is_missing(m.caps_prev[k])) total += m.caps_prev[k];
                }
                for (std::size_t a = 0; a < ids.size(); ++a) {
                    const std::size_t k = m.at(t, a);
                    if (m.member[k] && !is_missing(m.returns[k]) && !is_missing(m.caps_prev[k])) {
                        log[t].push_back({ids[a], m.caps_prev[k] / total});
                    }
                }
            } else {
                series.mark_index(t, result.status[t]);
            }
        }
    }
    return panel;
}

std::string format_panel_csv(const PanelSet& panels) {
    std::string out = "chain,kind,date,half,value,missing_flag\n";
    for (const auto& [chain, panel] : panels) {
        for (PortfolioKind kind : kAllKinds) {
            const auto& s = panel.get(kind);
            for (std::size_t i = 0; i < s.size(); ++i) {
                const HalfDayId t = s.coverage()[i];
                out += std::string(to_string(chain)) + "," + std::string(to_string(kind)) + "," + format_date(t.date) +
                       "," + std::string(to_string(t.half)) + "," + io::format_double(s.value(i)) + "," +
                       std::to_string(static_cast<int>(s.status(i))) + "\n";
            }
        }
    }
    return out;
}

PanelSet parse_panel_csv(std::string_view text, std::string_view origin) {
    const auto table = io::parse_csv(text, "chain,kind,date,half,value,missing_flag", origin);
    // Collect points first to size each series' coverage.
    std::map<std::pair<Chain, PortfolioKind>, std::vector<std::tuple<HalfDayId, double, int>>> points;
    for (const auto& row : table.rows) {
        const auto chain = parse_chain(row[0]);
        const auto kind = parse_portfolio_kind(row[1]);
        if (!chain || !kind) fail(ErrorCode::SchemaMismatch, std::string(origin) + ": bad chain/kind");
        points[{*chain, *kind}].emplace_back(HalfDayId{parse_date(row[2]), parse_half(row[3])}, io::parse_double(row[4]),
                                             std::stoi(row[5]));
    }
    PanelSet panels;
    for (auto& [key, pts] : points) {
        auto& panel = panels[key.first];
        panel.chain = key.first;
        HalfDayId lo = std::get<0>(pts.front()), hi = lo;
        for (const auto& p : pts) {
            lo = std::min(lo, std::get<0>(p));
            hi = std::max(hi, std::get<0>(p));
        }
        ReturnSeries s(panel_series_id(key.first, key.second), HalfDayRange::between(lo, hi));
        for (const auto& [t, v, flag] : pts) {
            if (flag == 0) {
                s.set(t, v);
            } else {
                s.mark(t, flag == 2 ? PointStatus::EmptyPortfolio : PointStatus::Missing);
            }
        }
        panel.get(key.second) = std::move(s);
    }
    return panels;
}

}  // namespace chainspill

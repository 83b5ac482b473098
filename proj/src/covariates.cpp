#include "chainspill/covariates.hpp"

#include "chainspill/error.hpp"
#include "chainspill/io.hpp"
#include "chainspill/kernels.hpp"
#include "chainspill/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace chainspill {

namespace {

void check_bar(const DailyBar& b, Date d) {
    if (!(b.open > 0.0) || !(b.close > 0.0)) {
        fail(ErrorCode::NonPositivePrice, "equity bar on " + format_date(d) + " has a non-positive price");
    }
}

}  // namespace

std::optional<double> overnight_return(const DailyBars& bars, Date d) {
    const auto it = bars.find(d);
    if (it == bars.end() || it == bars.begin()) return std::nullopt;
    const auto prev = std::prev(it);
    check_bar(it->second, d);
    check_bar(prev->second, prev->first);
    return std::log(it->second.open / prev->second.close);
}

std::optional<double> intraday_return(const DailyBars& bars, Date d) {
    const auto it = bars.find(d);
    if (it == bars.end()) return std::nullopt;
    check_bar(it->second, d);
    return std::log(it->second.close / it->second.open);
}

ReturnSeries global_return_series(EquityMarket market, const DailyBars& bars, const HalfDayRange& grid,
                                  std::string id) {
    ReturnSeries out(id.empty() ? std::string(to_string(market)) : std::move(id), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const HalfDayId t = grid[i];
        if (!bars.contains(t.date)) {
            out.set_index(i, 0.0);
            continue;
        }
        const auto r = session_alignment(market, t.half) == Session::Overnight ? overnight_return(bars, t.date)
                                                                               : intraday_return(bars, t.date);
        if (r) out.set_index(i, *r);
    }
    return out;
}

Series half_day_rate_series(const std::map<Date, double>& daily, const HalfDayRange& grid, std::string id) {
    Series out(std::move(id), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto it = daily.upper_bound(grid[i].date);
        if (it == daily.begin()) continue;
        out.set_index(i, std::prev(it)->second);
    }
    return out;
}

Innovation innovation_series(const Series& raw, const InnovationBounds& bounds, int jobs) {
    const econ::PresentRun run = econ::longest_present_run(raw);
    if (run.count < 50) {
        fail(ErrorCode::InsufficientData, "series '" + raw.id() + "' has " + std::to_string(run.count) +
                                              " contiguous observations, need 50");
    }
    Innovation out{ReturnSeries(raw.id(), raw.coverage()), {}, kMissing};
    const double first = raw.value(run.first);
    bool constant = true;
    for (std::size_t i = run.first; i < run.first + run.count && constant; ++i) constant = raw.value(i) == first;
    if (constant) {
        for (std::size_t i = run.first; i < run.first + run.count; ++i) out.residuals.set_index(i, 0.0);
        return out;
    }

    std::vector<econ::ArimaOrder> orders;
    for (int p = 0; p <= bounds.p_max; ++p) {
        for (int d = 0; d <= bounds.d_max; ++d) {
            for (int q = 0; q <= bounds.q_max; ++q) orders.push_back({p, d, q});
        }
    }
    econ::ArimaOptions opts;
    opts.condition = static_cast<std::size_t>(bounds.d_max + std::max(bounds.p_max, bounds.q_max));
    std::vector<std::optional<econ::ArimaSeriesFit>> fits(orders.size());
    kernels::parallel_for(orders.size(), jobs, [&](std::size_t i) {
        try {
            fits[i] = econ::fit_arima(raw, orders[i], opts);
        } catch (const Error&) {
            // candidate infeasible or non-convergent; others may still succeed
        }
    });
    std::optional<std::size_t> best;
    const auto key = [&](std::size_t i) {
        const auto& o = orders[i];
        return std::make_tuple(fits[i]->fit.aic, o.p + o.d + o.q, o.p, o.d, o.q);
    };
    for (std::size_t i = 0; i < fits.size(); ++i) {
        if (fits[i] && (!best || key(i) < key(*best))) best = i;
    }
    if (!best) fail(ErrorCode::NonConvergence, "every ARIMA candidate failed for '" + raw.id() + "'");
    out.residuals = std::move(fits[*best]->residuals);
    out.order = orders[*best];
    out.aic = fits[*best]->fit.aic;
    return out;
}

double quantile_type7(const std::vector<double>& sorted, double prob) {
    if (sorted.empty()) fail(ErrorCode::InsufficientData, "quantile of an empty sample");
    const double h = static_cast<double>(sorted.size() - 1) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

DummyPair extreme_dummies(const Series& reference, double tail) {
    if (!(tail > 0.0 && tail < 0.5)) fail(ErrorCode::InvalidArgument, "tail probability must lie in (0, 0.5)");
    std::vector<double> v = reference.present_values();
    if (v.size() < 40) {
        fail(ErrorCode::InsufficientData, "extreme dummies need 40 observations of '" + reference.id() + "'");
    }
    std::sort(v.begin(), v.end());
    DummyPair out;
    out.q_low = quantile_type7(v, tail);
    out.q_high = quantile_type7(v, 1.0 - tail);
    if (!(out.q_low < out.q_high)) {
        fail(ErrorCode::DegenerateDistribution, "tail quantiles of '" + reference.id() + "' coincide");
    }
    out.upper = Series("DU_" + reference.id(), reference.coverage());
    out.lower = Series("DL_" + reference.id(), reference.coverage());
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double r = reference.value(i);
        if (is_missing(r)) continue;
        out.upper.set_index(i, r >= out.q_high ? 1.0 : 0.0);
        out.lower.set_index(i, r <= out.q_low ? 1.0 : 0.0);
    }
    return out;
}

const ReturnSeries& Covariates::get(const std::string& id) const {
    const auto it = series.find(id);
    if (it == series.end()) fail(ErrorCode::MissingSeries, "covariate '" + id + "' is not available");
    return it->second;
}

std::string native_return_id(const std::string& symbol) { return "R_" + symbol; }

std::string activity_id(Chain chain) { return "SR_" + std::string(to_string(chain)); }

std::string equity_return_id(EquityMarket market) {
    switch (market) {
        case EquityMarket::SP500: return "SPR";
        case EquityMarket::HangSeng: return "HSR";
        case EquityMarket::FTSE100: return "FTSER";
    }
    return "?";
}

namespace {

const std::vector<ingest::SeriesPoint>& require(const ingest::SeriesStore& store, const std::string& id) {
    const auto it = store.find(id);
    if (it == store.end()) fail(ErrorCode::MissingSeries, "series.csv has no '" + id + "'");
    return it->second;
}

}  // namespace

Covariates build_covariates(const ingest::SeriesStore& store, const HalfDayRange& grid, const CovariateOptions& options) {
    Covariates out;
    for (const auto& sym : kNativeSymbols) {
        const std::string src = "native." + sym;
        const Series prices = ingest::to_half_day_series(src, require(store, src)).reindex(grid);
        out.series[native_return_id(sym)] = log_return(prices, native_return_id(sym));
    }
    for (EquityMarket m : {EquityMarket::SP500, EquityMarket::HangSeng, EquityMarket::FTSE100}) {
        const std::string base = "equity." + std::string(to_string(m));
        const auto opens = ingest::to_daily(base + ".open", require(store, base + ".open"));
        const auto closes = ingest::to_daily(base + ".close", require(store, base + ".close"));
        DailyBars bars;
        for (const auto& [d, o] : opens) {
            const auto c = closes.find(d);
            if (c != closes.end()) bars[d] = {o, c->second};
        }
        out.series[equity_return_id(m)] = global_return_series(m, bars, grid, equity_return_id(m));
    }

    // Level series that enter as ARIMA innovations.
    std::vector<std::pair<std::string, Series>> levels;
    for (Chain c : kAllChains) {
        const std::string src = "staking." + std::string(to_string(c));
        levels.emplace_back(activity_id(c), half_day_rate_series(ingest::to_daily(src, require(store, src)), grid,
                                                                  activity_id(c)));
    }
    for (const auto& name : kRateNames) {
        const std::string src = "rate." + name;
        levels.emplace_back(name, half_day_rate_series(ingest::to_daily(src, require(store, src)), grid, name));
    }
    // Series fan out here; the candidate grid inside each stays serial.
    std::vector<std::optional<Innovation>> innov(levels.size());
    kernels::parallel_for(levels.size(), options.jobs,
                          [&](std::size_t i) { innov[i] = innovation_series(levels[i].second, options.bounds, 1); });
    for (std::size_t i = 0; i < levels.size(); ++i) {
        out.series[levels[i].first] = std::move(innov[i]->residuals);
        out.arima.push_back({levels[i].first, innov[i]->order, innov[i]->aic});
    }
    return out;
}

std::string format_covariates_csv(const Covariates& c) {
    std::ostringstream os;
    os << "series_id,date,half,value\n";
    for (const auto& [id, s] : c.series) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            const HalfDayId t = s.coverage()[i];
            os << id << ',' << format_date(t.date) << ',' << to_string(t.half) << ',' << io::format_double(s.value(i))
               << '\n';
        }
    }
    return os.str();
}

std::map<std::string, ReturnSeries> parse_covariates_csv(std::string_view text, std::string_view origin) {
    const io::CsvTable table = io::parse_csv(text, "series_id,date,half,value", origin);
    std::map<std::string, std::vector<std::pair<HalfDayId, double>>> points;
    for (const auto& row : table.rows) {
        points[row[0]].push_back({HalfDayId{parse_date(row[1]), parse_half(row[2])}, io::parse_double(row[3])});
    }
    std::map<std::string, ReturnSeries> out;
    for (auto& [id, pts] : points) {
        std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        ReturnSeries s(id, HalfDayRange::between(pts.front().first, pts.back().first));
        for (const auto& [t, v] : pts) s.set(t, v);
        out.emplace(id, std::move(s));
    }
    return out;
}

std::string format_arima_report(const std::vector<ArimaReportRow>& rows) {
    std::ostringstream os;
    os << "series_id,p,d,q,aic\n";
    for (const auto& r : rows) {
        os << r.series_id << ',' << r.order.p << ',' << r.order.d << ',' << r.order.q << ','
           << io::format_double(r.aic) << '\n';
    }
    return os.str();
}

}  // namespace chainspill

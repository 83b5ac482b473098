#pragma once

#include "chainspill/econometrics/arima.hpp"
#include "chainspill/ingest.hpp"
#include "chainspill/series.hpp"
#include "chainspill/timebase.hpp"
#include "chainspill/universe.hpp"

#include <map>
#include <string>
#include <vector>

namespace chainspill {

struct DailyBar {
    double open = 0.0;
    double close = 0.0;
};

/// Trading days only; a date absent from the map is a closed market.
using DailyBars = std::map<Date, DailyBar>;

/// ln(open_d / close of the previous trading day); nullopt on a closed day or
/// when no earlier trading day exists.
[[nodiscard]] std::optional<double> overnight_return(const DailyBars& bars, Date d);
/// ln(close_d / open_d); nullopt on a closed day.
[[nodiscard]] std::optional<double> intraday_return(const DailyBars& bars, Date d);

/// Per half-day, the session component chosen by session_alignment(). Closed
/// days contribute 0; an open day without a previous close is missing.
[[nodiscard]] ReturnSeries global_return_series(EquityMarket market, const DailyBars& bars, const HalfDayRange& grid,
                                                std::string id = {});

/// Step interpolation of a daily series onto the grid: each half-day carries
/// the latest value dated on or before its day. Missing before the first value.
[[nodiscard]] Series half_day_rate_series(const std::map<Date, double>& daily, const HalfDayRange& grid,
                                          std::string id = {});

struct InnovationBounds {
    int p_max = 3;
    int d_max = 1;
    int q_max = 3;
};

struct ArimaReportRow {
    std::string series_id;
    econ::ArimaOrder order;
    double aic = 0.0;  // NaN when the input was constant
};

struct Innovation {
    ReturnSeries residuals;
    econ::ArimaOrder order;
    double aic = 0.0;
};

/// ARIMA residuals of `raw` under the minimum-AIC order in bounds. All
/// candidates share one conditioning sample. A constant input yields zero
/// residuals and order (0,0,0).
[[nodiscard]] Innovation innovation_series(const Series& raw, const InnovationBounds& bounds = {}, int jobs = 1);

struct DummyPair {
    Series upper;
    Series lower;
    double q_low = 0.0;
    double q_high = 0.0;
};

/// Type-7 sample quantile of sorted data.
[[nodiscard]] double quantile_type7(const std::vector<double>& sorted, double prob);

/// upper_t = 1[r_t >= q(1 - tail)], lower_t = 1[r_t <= q(tail)] over the
/// present values of `reference`.
[[nodiscard]] DummyPair extreme_dummies(const Series& reference, double tail = 0.05);

/// Native-token returns, activity innovations, equity returns and rate
/// innovations keyed by regressor id (R_ETH, SR_Ethereum, SPR, HIBOR, ...).
struct Covariates {
    std::map<std::string, ReturnSeries> series;
    std::vector<ArimaReportRow> arima;

    [[nodiscard]] const ReturnSeries& get(const std::string& id) const;
};

inline const std::vector<std::string> kNativeSymbols{"BTC", "ETH", "SOL", "BNB", "ARB", "AVAX"};
inline const std::vector<std::string> kRateNames{"EURIBOR", "HIBOR", "TREA"};

[[nodiscard]] std::string native_return_id(const std::string& symbol);  // R_ETH
[[nodiscard]] std::string activity_id(Chain chain);                     // SR_Ethereum
[[nodiscard]] std::string equity_return_id(EquityMarket market);        // SPR, HSR, FTSER

struct CovariateOptions {
    InnovationBounds bounds;
    int jobs = 1;
};

/// Builds every covariate from raw `series.csv` content. Input ids:
/// native.<SYM> (half-day prices), staking.<Chain> (daily, annualised %),
/// equity.<Market>.open / .close (daily), rate.<NAME> (daily).
[[nodiscard]] Covariates build_covariates(const ingest::SeriesStore& store, const HalfDayRange& grid,
                                          const CovariateOptions& options = {});

/// `covariates.csv`: `series_id,date,half,value` over every grid point ("NA" when missing).
[[nodiscard]] std::string format_covariates_csv(const Covariates& c);
[[nodiscard]] std::map<std::string, ReturnSeries> parse_covariates_csv(std::string_view text,
                                                                       std::string_view origin = "covariates.csv");
/// `arima_report.csv`: `series_id,p,d,q,aic`.
[[nodiscard]] std::string format_arima_report(const std::vector<ArimaReportRow>& rows);

}  // namespace chainspill

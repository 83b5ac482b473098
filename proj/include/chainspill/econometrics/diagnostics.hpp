#pragma once

#include <optional>
#include <span>
#include <string>

namespace chainspill::econ {

enum class Significance { None = 0, Ten = 1, Five = 2, One = 3 };

[[nodiscard]] std::string stars(Significance s);
/// Two-sided normal thresholds |t| >= 2.576 / 1.960 / 1.645.
[[nodiscard]] Significance significance_from_t(double t) noexcept;
/// e.g. "-18.1133***"
[[nodiscard]] std::string format_with_stars(double value, int decimals, Significance s);

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double std = 0.0;  // sample (n - 1) standard deviation
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

/// Skewness and excess kurtosis are the moment-based (population) estimators.
[[nodiscard]] Moments describe(std::span<const double> x);

struct JarqueBera {
    double statistic = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double p_value = 1.0;
    Significance level = Significance::None;
};

/// JB = n/6 (S^2 + K^2/4) against chi-square(2).
[[nodiscard]] JarqueBera jarque_bera(std::span<const double> x);

struct AdfResult {
    double statistic = 0.0;
    int lags = 0;
    std::size_t n_obs = 0;  // observations in the final regression
    double crit_1 = 0.0;
    double crit_5 = 0.0;
    double crit_10 = 0.0;
    Significance level = Significance::None;
};

/// Constant-only augmented Dickey-Fuller test; lags chosen by AIC on a common
/// sample up to `max_lags` (default floor(12 (T/100)^(1/4))), then refitted.
[[nodiscard]] AdfResult adf_test(std::span<const double> y, std::optional<int> max_lags = std::nullopt);

/// MacKinnon (2010) response-surface critical value, constant-only case.
/// `level` is 1, 5 or 10 (percent).
[[nodiscard]] double adf_critical_value(int level, std::size_t n_obs);

struct LjungBox {
    double statistic = 0.0;
    double p_value = 1.0;
    int lags = 0;
    int df = 0;
};

/// Q = n(n+2) sum_k r_k^2/(n-k) against chi-square(lags - fitted_params).
[[nodiscard]] LjungBox ljung_box(std::span<const double> residuals, int lags, int fitted_params = 0);

}  // namespace chainspill::econ

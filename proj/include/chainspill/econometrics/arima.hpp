#pragma once

#include "chainspill/series.hpp"

#include <compare>
#include <span>
#include <string>
#include <vector>

namespace chainspill::econ {

struct ArimaOrder {
    int p = 0;
    int d = 0;
    int q = 0;

    friend auto operator<=>(const ArimaOrder&, const ArimaOrder&) = default;
    [[nodiscard]] std::string to_string() const;
};

struct ArimaOptions {
    /// Leading observations of the original series kept out of the likelihood.
    /// Candidates fitted with the same value share a sample, so their AICs compare.
    std::size_t condition = 0;
    int max_iterations = 500;
};

struct ArimaFit {
    ArimaOrder order;
    std::vector<double> ar;
    std::vector<double> ma;
    double intercept = 0.0;  // mean of the differenced series
    double sigma2 = 0.0;
    double loglik = 0.0;
    double aic = 0.0;
    std::size_t n_used = 0;
    double gradient_norm = 0.0;
    /// One per input value; NaN for the first d + max(p, q).
    std::vector<double> residuals;
};

/// Conditional-sum-of-squares Gaussian fit of an ARMA(p, q) with mean to the
/// d-times differenced input:
///   (w_t - mu) = sum phi_i (w_{t-i} - mu) + e_t + sum theta_j e_{t-j}.
/// phi and theta are parameterised through partial autocorrelations so the AR
/// part is stationary and the MA part invertible.
[[nodiscard]] ArimaFit fit_arima(std::span<const double> y, ArimaOrder order, const ArimaOptions& options = {});

/// Same on a grid series: uses the longest run of present values, residuals
/// land back on the series coverage.
struct ArimaSeriesFit {
    ArimaFit fit;
    ReturnSeries residuals;
};
[[nodiscard]] ArimaSeriesFit fit_arima(const Series& y, ArimaOrder order, const ArimaOptions& options = {});

/// Durbin-Levinson map from partial autocorrelations to AR coefficients.
[[nodiscard]] std::vector<double> pacf_to_ar(std::span<const double> pacf);

[[nodiscard]] std::vector<double> difference(std::span<const double> y, int d);

/// Longest run of present values: [first, first + count).
struct PresentRun {
    std::size_t first = 0;
    std::size_t count = 0;
};
[[nodiscard]] PresentRun longest_present_run(const Series& s);

}  // namespace chainspill::econ

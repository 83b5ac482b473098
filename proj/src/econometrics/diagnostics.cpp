#include "chainspill/econometrics/diagnostics.hpp"

#include "chainspill/econometrics/ols.hpp"
#include "chainspill/error.hpp"
#include "chainspill/io.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <array>
#include <cmath>
#include <limits>

namespace chainspill::econ {

std::string stars(Significance s) {
    switch (s) {
        case Significance::One: return "***";
        case Significance::Five: return "**";
        case Significance::Ten: return "*";
        case Significance::None: break;
    }
    return "";
}

Significance significance_from_t(double t) noexcept {
    const double a = std::abs(t);
    if (a >= 2.576) return Significance::One;
    if (a >= 1.960) return Significance::Five;
    if (a >= 1.645) return Significance::Ten;
    return Significance::None;
}

std::string format_with_stars(double value, int decimals, Significance s) {
    return io::format_fixed(value, decimals) + stars(s);
}

Moments describe(std::span<const double> x) {
    Moments m;
    m.n = x.size();
    if (m.n == 0) fail(ErrorCode::InsufficientData, "describe: empty sample");
    double sum = 0.0;
    for (double v : x) sum += v;
    m.mean = sum / static_cast<double>(m.n);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - m.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double n = static_cast<double>(m.n);
    m.std = m.n > 1 ? std::sqrt(m2 / (n - 1.0)) : 0.0;
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 > 0.0) {
        m.skewness = m3 / std::pow(m2, 1.5);
        m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    } else {
        m.skewness = std::nan("");
        m.excess_kurtosis = std::nan("");
    }
    return m;
}

JarqueBera jarque_bera(std::span<const double> x) {
    if (x.size() < 8) fail(ErrorCode::InsufficientData, "Jarque-Bera needs at least 8 observations");
    const Moments m = describe(x);
    if (!(m.std > 0.0) || !std::isfinite(m.skewness)) fail(ErrorCode::ZeroVariance, "Jarque-Bera: zero variance");
    JarqueBera r;
    r.skewness = m.skewness;
    r.excess_kurtosis = m.excess_kurtosis;
    r.statistic = static_cast<double>(m.n) / 6.0 * (m.skewness * m.skewness + 0.25 * m.excess_kurtosis * m.excess_kurtosis);
    const boost::math::chi_squared chi2(2.0);
    r.p_value = boost::math::cdf(boost::math::complement(chi2, r.statistic));
    if (r.statistic >= boost::math::quantile(boost::math::complement(chi2, 0.01))) {
        r.level = Significance::One;
    } else if (r.statistic >= boost::math::quantile(boost::math::complement(chi2, 0.05))) {
        r.level = Significance::Five;
    } else if (r.statistic >= boost::math::quantile(boost::math::complement(chi2, 0.10))) {
        r.level = Significance::Ten;
    }
    return r;
}

double adf_critical_value(int level, std::size_t n_obs) {
    // tau_c coefficients: beta_inf, beta_1, beta_2, beta_3.
    static constexpr std::array<double, 4> one{-3.43035, -6.5393, -16.786, -79.433};
    static constexpr std::array<double, 4> five{-2.86154, -2.8903, -4.234, -40.040};
    static constexpr std::array<double, 4> ten{-2.56677, -1.5384, -2.809, 0.0};
    const std::array<double, 4>* c = nullptr;
    switch (level) {
        case 1: c = &one; break;
        case 5: c = &five; break;
        case 10: c = &ten; break;
        default: fail(ErrorCode::InvalidArgument, "ADF critical values exist for 1, 5 and 10 percent");
    }
    const double t = static_cast<double>(n_obs);
    return (*c)[0] + (*c)[1] / t + (*c)[2] / (t * t) + (*c)[3] / (t * t * t);
}

namespace {

// Delta y_t on [1, y_{t-1}, dy_{t-1..t-lags}] for t in [first, T).
struct AdfRegression {
    Matrix X;
    Vector y;
};

AdfRegression adf_regression(std::span<const double> y, int lags, std::size_t first) {
    const std::size_t T = y.size();
    const auto rows = static_cast<Eigen::Index>(T - first);
    AdfRegression r{Matrix(rows, 2 + lags), Vector(rows)};
    for (std::size_t t = first; t < T; ++t) {
        const auto i = static_cast<Eigen::Index>(t - first);
        r.y[i] = y[t] - y[t - 1];
        r.X(i, 0) = 1.0;
        r.X(i, 1) = y[t - 1];
        for (int l = 1; l <= lags; ++l) r.X(i, 1 + l) = y[t - l] - y[t - l - 1];
    }
    return r;
}

}  // namespace

AdfResult adf_test(std::span<const double> y, std::optional<int> max_lags) {
    const std::size_t T = y.size();
    if (T < 25) fail(ErrorCode::InsufficientData, "ADF needs at least 25 observations");
    for (double v : y) {
        if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "ADF input contains missing values");
    }
    int max_l = max_lags ? *max_lags : static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(T) / 100.0, 0.25)));
    if (max_l < 0) fail(ErrorCode::InvalidArgument, "negative ADF lag bound");
    // Keep at least ten residual degrees of freedom in the largest regression.
    while (max_l > 0 && static_cast<int>(T) - max_l - 1 < 2 * (max_l + 2) + 10) --max_l;

    int best_lag = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    const auto first_common = static_cast<std::size_t>(max_l + 1);
    for (int l = 0; l <= max_l; ++l) {
        const AdfRegression reg = adf_regression(y, l, first_common);
        const OlsResult fit = ols(reg.X, reg.y);
        const double n = static_cast<double>(reg.y.size());
        const double aic = n * std::log(fit.ssr / n) + 2.0 * static_cast<double>(reg.X.cols());
        if (aic < best_aic) {
            best_aic = aic;
            best_lag = l;
        }
    }
    const AdfRegression reg = adf_regression(y, best_lag, static_cast<std::size_t>(best_lag + 1));
    const OlsResult fit = ols(reg.X, reg.y);
    AdfResult r;
    r.lags = best_lag;
    r.n_obs = static_cast<std::size_t>(reg.y.size());
    r.statistic = fit.beta[1] / fit.std_errors[1];
    r.crit_1 = adf_critical_value(1, r.n_obs);
    r.crit_5 = adf_critical_value(5, r.n_obs);
    r.crit_10 = adf_critical_value(10, r.n_obs);
    if (r.statistic <= r.crit_1) {
        r.level = Significance::One;
    } else if (r.statistic <= r.crit_5) {
        r.level = Significance::Five;
    } else if (r.statistic <= r.crit_10) {
        r.level = Significance::Ten;
    }
    return r;
}

LjungBox ljung_box(std::span<const double> residuals, int lags, int fitted_params) {
    const std::size_t n = residuals.size();
    if (lags < 1) fail(ErrorCode::InvalidArgument, "Ljung-Box needs at least one lag");
    if (!(static_cast<double>(lags) < static_cast<double>(n) / 4.0)) {
        fail(ErrorCode::InsufficientData, "Ljung-Box needs lags < n/4 (n = " + std::to_string(n) + ")");
    }
    const int df = lags - fitted_params;
    if (df < 1) fail(ErrorCode::InvalidArgument, "Ljung-Box degrees of freedom must be positive");
    double mean = 0.0;
    for (double v : residuals) mean += v;
    mean /= static_cast<double>(n);
    double c0 = 0.0;
    for (double v : residuals) c0 += (v - mean) * (v - mean);
    if (!(c0 > 0.0)) fail(ErrorCode::ZeroVariance, "Ljung-Box: zero variance");
    double q = 0.0;
    for (int k = 1; k <= lags; ++k) {
        double ck = 0.0;
        for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t) ck += (residuals[t] - mean) * (residuals[t - k] - mean);
        const double rk = ck / c0;
        q += rk * rk / static_cast<double>(n - static_cast<std::size_t>(k));
    }
    const double nn = static_cast<double>(n);
    LjungBox r;
    r.statistic = nn * (nn + 2.0) * q;
    r.lags = lags;
    r.df = df;
    r.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), r.statistic));
    return r;
}

}  // namespace chainspill::econ

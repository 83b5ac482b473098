#include "chainspill/econometrics/arima.hpp"

#include "chainspill/econometrics/optimizer.hpp"
#include "chainspill/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace chainspill::econ {

std::string ArimaOrder::to_string() const {
    return "(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) + ")";
}

std::vector<double> pacf_to_ar(std::span<const double> pacf) {
    std::vector<double> phi;
    for (std::size_t k = 0; k < pacf.size(); ++k) {
        std::vector<double> next(k + 1);
        next[k] = pacf[k];
        for (std::size_t j = 0; j < k; ++j) next[j] = phi[j] - pacf[k] * phi[k - 1 - j];
        phi = std::move(next);
    }
    return phi;
}

std::vector<double> difference(std::span<const double> y, int d) {
    std::vector<double> w(y.begin(), y.end());
    for (int k = 0; k < d; ++k) {
        if (w.empty()) break;
        for (std::size_t t = w.size() - 1; t > 0; --t) w[t] -= w[t - 1];
        w.erase(w.begin());
    }
    return w;
}

namespace {

// Sample partial autocorrelations up to `p` (Durbin-Levinson on the sample ACF).
std::vector<double> sample_pacf(const std::vector<double>& z, int p) {
    const std::size_t n = z.size();
    std::vector<double> acf(p + 1, 0.0);
    for (int k = 0; k <= p; ++k) {
        double s = 0.0;
        for (std::size_t t = k; t < n; ++t) s += z[t] * z[t - k];
        acf[k] = s / static_cast<double>(n);
    }
    std::vector<double> out;
    std::vector<double> phi;
    for (int k = 1; k <= p; ++k) {
        double num = acf[k];
        double den = acf[0];
        for (int j = 1; j < k; ++j) {
            num -= phi[j - 1] * acf[k - j];
            den -= phi[j - 1] * acf[j];
        }
        const double r = den > 0.0 ? num / den : 0.0;
        std::vector<double> next(k);
        next[k - 1] = r;
        for (int j = 0; j < k - 1; ++j) next[j] = phi[j] - r * phi[k - 2 - j];
        phi = std::move(next);
        out.push_back(r);
    }
    return out;
}

struct Css {
    const std::vector<double>& z;  // standardised differenced series
    int p;
    int q;
    std::size_t start;  // first index that enters the sum of squares

    void unpack(const Vector& u, double& mu, std::vector<double>& phi, std::vector<double>& theta) const {
        mu = u[0];
        std::vector<double> r(p);
        for (int i = 0; i < p; ++i) r[i] = std::tanh(u[1 + i]);
        phi = pacf_to_ar(r);
        std::vector<double> s(q);
        for (int j = 0; j < q; ++j) s[j] = std::tanh(u[1 + p + j]);
        theta = pacf_to_ar(s);
        for (double& t : theta) t = -t;
    }

    double ssr(const Vector& u, std::vector<double>* resid = nullptr) const {
        double mu = 0.0;
        std::vector<double> phi, theta;
        unpack(u, mu, phi, theta);
        const std::size_t n = z.size();
        std::vector<double> e(n, 0.0);
        double total = 0.0;
        for (std::size_t t = static_cast<std::size_t>(p); t < n; ++t) {
            double v = z[t] - mu;
            for (int i = 1; i <= p; ++i) v -= phi[i - 1] * (z[t - i] - mu);
            for (int j = 1; j <= q && static_cast<std::size_t>(j) <= t; ++j) v -= theta[j - 1] * e[t - j];
            e[t] = v;
            if (t >= start) total += v * v;
        }
        if (resid) *resid = std::move(e);
        return total;
    }
};

}  // namespace

ArimaFit fit_arima(std::span<const double> y, ArimaOrder order, const ArimaOptions& options) {
    if (order.p < 0 || order.d < 0 || order.q < 0) fail(ErrorCode::InvalidArgument, "negative ARIMA order");
    for (double v : y) {
        if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "fit_arima: input contains missing values");
    }
    const std::vector<double> w = difference(y, order.d);
    const std::size_t m = w.size();
    const std::size_t need = 10 * static_cast<std::size_t>(order.p + order.q + 1);
    if (m < need) {
        fail(ErrorCode::InsufficientData, "ARIMA" + order.to_string() + " needs " + std::to_string(need) +
                                              " differenced observations, have " + std::to_string(m));
    }
    const std::size_t cond_w = options.condition > static_cast<std::size_t>(order.d)
                                   ? options.condition - static_cast<std::size_t>(order.d)
                                   : 0;
    const std::size_t start = std::max<std::size_t>(order.p, cond_w);
    if (start + 2 >= m) fail(ErrorCode::InsufficientData, "conditioning leaves no observations");

    const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(m);
    double var = 0.0;
    for (double v : w) var += (v - mean) * (v - mean);
    var /= static_cast<double>(m);
    const double sd = std::sqrt(var);
    if (!(sd > 0.0) || sd < 1e-12 * std::max(1.0, std::abs(mean))) {
        fail(ErrorCode::DegenerateSeries, "differenced series has zero variance");
    }
    std::vector<double> z(m);
    for (std::size_t t = 0; t < m; ++t) z[t] = (w[t] - mean) / sd;

    const Css css{z, order.p, order.q, start};
    const double n_used = static_cast<double>(m - start);
    const Objective objective = [&](const Vector& u) { return std::log(css.ssr(u) / n_used); };

    Vector u0 = Vector::Zero(1 + order.p + order.q);
    const auto pacf = sample_pacf(z, order.p);
    for (int i = 0; i < order.p; ++i) u0[1 + i] = std::atanh(std::clamp(pacf[i], -0.95, 0.95));

    BfgsOptions bopts;
    bopts.max_iterations = options.max_iterations;
    BfgsResult best = minimize_bfgs(objective, u0, bopts);
    if (order.p + order.q > 0) {
        // Second start from white noise guards against a poor PACF start.
        BfgsResult alt = minimize_bfgs(objective, Vector::Zero(u0.size()), bopts);
        if (alt.value < best.value) best = std::move(alt);
    }
    if (!(best.gradient_norm() <= 1e-4)) {
        fail(ErrorCode::NonConvergence, "ARIMA" + order.to_string() + " stopped with gradient norm " +
                                            std::to_string(best.gradient_norm()));
    }

    ArimaFit fit;
    fit.order = order;
    double mu_z = 0.0;
    css.unpack(best.x, mu_z, fit.ar, fit.ma);
    fit.intercept = mean + sd * mu_z;
    std::vector<double> e;
    const double ssr_z = css.ssr(best.x, &e);
    fit.n_used = m - start;
    fit.sigma2 = ssr_z * var / n_used;
    fit.loglik = -0.5 * n_used * (std::log(2.0 * std::numbers::pi * fit.sigma2) + 1.0);
    fit.aic = 2.0 * (order.p + order.q + 2) - 2.0 * fit.loglik;
    fit.gradient_norm = best.gradient_norm();

    fit.residuals.assign(y.size(), kMissing);
    const std::size_t skip = static_cast<std::size_t>(std::max(order.p, order.q));
    for (std::size_t t = skip; t < m; ++t) fit.residuals[t + order.d] = e[t] * sd;
    return fit;
}

PresentRun longest_present_run(const Series& s) {
    PresentRun best;
    std::size_t i = 0;
    while (i < s.size()) {
        if (is_missing(s.value(i))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < s.size() && !is_missing(s.value(j))) ++j;
        if (j - i > best.count) best = {i, j - i};
        i = j;
    }
    return best;
}

ArimaSeriesFit fit_arima(const Series& y, ArimaOrder order, const ArimaOptions& options) {
    const PresentRun run = longest_present_run(y);
    std::span<const double> block(y.values().data() + run.first, run.count);
    ArimaSeriesFit out{fit_arima(block, order, options), Series(y.id(), y.coverage())};
    for (std::size_t t = 0; t < run.count; ++t) out.residuals.set_index(run.first + t, out.fit.residuals[t]);
    return out;
}

}  // namespace chainspill::econ

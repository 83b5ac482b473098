#pragma once

#include "chainspill/econometrics/optimizer.hpp"
#include "chainspill/timebase.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chainspill::econ {

struct GarchOrder {
    int p = 1;  // ARCH lags
    int o = 0;  // leverage lags
    int q = 1;  // GARCH lags

    friend auto operator<=>(const GarchOrder&, const GarchOrder&) = default;
    [[nodiscard]] int total() const noexcept { return p + o + q; }
    [[nodiscard]] std::string to_string() const;
};

/// sigma2_t = omega + sum alpha_i e_{t-i}^2 + sum gamma_j e_{t-j}^2 1[e_{t-j} < 0]
///          + sum beta_k sigma2_{t-k}
struct GjrParams {
    double omega = 0.0;
    std::vector<double> alpha;
    std::vector<double> gamma;
    std::vector<double> beta;

    [[nodiscard]] GarchOrder order() const noexcept;
    /// sum alpha + sum gamma / 2 + sum beta
    [[nodiscard]] double persistence() const noexcept;
    [[nodiscard]] double unconditional_variance() const;
};

/// Persistence allowed by the parameterisation.
inline constexpr double kPersistenceCap = 1.0 - 1e-6;
/// Fits at or above this persistence are flagged as pinned to the boundary.
inline constexpr double kBoundaryFlag = 1.0 - 1e-4;

/// Gaussian log-likelihood of `residuals` under GJR variance dynamics.
/// Pre-sample e^2 and sigma2 are `backcast`; pre-sample e^2 1[e<0] is backcast/2.
/// Returns -inf when the recursion produces a non-positive variance.
[[nodiscard]] double gjr_loglik(std::span<const double> residuals, const GjrParams& params, double backcast,
                                std::vector<double>* sigma2 = nullptr, std::vector<double>* terms = nullptr);

/// Regression data after listwise deletion. The intercept is implicit.
struct DesignMatrix {
    std::string y_name;
    std::vector<HalfDayId> rows;
    std::vector<std::string> names;  // regressors, excluding the intercept
    std::vector<std::string> labels;  // human-readable column descriptions
    Matrix X;
    Vector y;
    std::size_t dropped = 0;  // rows removed for missing cells

    [[nodiscard]] std::size_t n_obs() const noexcept { return static_cast<std::size_t>(y.size()); }
    [[nodiscard]] std::size_t columns() const noexcept { return names.size(); }
};

struct GarchOptions {
    int restarts = 5;
    std::uint64_t seed = 0;
    /// Fix the mean equation at OLS and estimate the variance only (diagnostic).
    bool two_step = false;
    /// Also compute sandwich (OPG) t-statistics.
    bool robust = false;
    int max_iterations = 2000;
    double rel_tol = 1e-9;
    double gradient_tol = 1e-4;
    /// Enforce n_obs >= 20 (k + p + o + q + 1).
    bool enforce_min_obs = true;
    /// Return non-converged fits instead of throwing NonConvergence.
    bool allow_nonconverged = false;
};

struct FitResult {
    GarchOrder order;
    std::vector<std::string> mean_names;  // "alpha_0" then the design columns
    Vector mean_coefficients;
    Vector mean_std_errors;
    Vector mean_tstats;
    Vector mean_robust_tstats;  // empty unless requested
    GjrParams variance;
    std::vector<std::string> variance_names;  // omega, alpha_i, gamma_j, beta_k
    Vector variance_coefficients;
    Vector variance_std_errors;
    Vector variance_tstats;
    Vector variance_robust_tstats;
    double loglik = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    double r2 = 0.0;
    double adj_r2 = 0.0;
    std::size_t n_obs = 0;
    std::size_t n_params = 0;
    double gradient_norm = 0.0;
    bool converged = false;
    bool stationarity_boundary = false;
    Vector residuals;
    Vector conditional_variance;
    /// Optimum in the unconstrained, standardised coordinates the optimizer used.
    Vector optimizer_point;

    /// "mean.<name>" and "variance.<name>".
    [[nodiscard]] std::vector<std::string> qualified_names() const;
    [[nodiscard]] std::optional<std::size_t> mean_index(std::string_view name) const;
};

/// Joint Gaussian QMLE of y = a0 + X b + e with GJR(p, o, q) errors.
[[nodiscard]] FitResult fit_garch_regression(const DesignMatrix& design, GarchOrder order,
                                             const GarchOptions& options = {});

/// The optimizer's objective (mean negative log-likelihood per observation in
/// the standardised, unconstrained coordinates) for an already-cleaned design.
/// Exposed for gradient checks.
[[nodiscard]] Objective garch_objective(const DesignMatrix& design, GarchOrder order);

struct OrderBounds {
    int p_min = 1, p_max = 3;
    int o_min = 0, o_max = 3;
    int q_min = 1, q_max = 3;

    [[nodiscard]] std::vector<GarchOrder> enumerate() const;
};

struct CandidateSummary {
    GarchOrder order;
    double aic = 0.0;
    bool converged = false;
    std::string error;
};

struct OrderSelection {
    FitResult fit;
    std::vector<CandidateSummary> candidates;
};

/// Fits every order in bounds (concurrently over `jobs` workers) and returns the
/// minimum-AIC converged fit. Ties go to the smaller p+o+q, then (p, o, q).
[[nodiscard]] OrderSelection select_garch_order(const DesignMatrix& design, const OrderBounds& bounds,
                                                const GarchOptions& options = {}, int jobs = 1);

/// Drops rows with a missing cell in y or X.
[[nodiscard]] DesignMatrix drop_missing_rows(const DesignMatrix& design);

}  // namespace chainspill::econ

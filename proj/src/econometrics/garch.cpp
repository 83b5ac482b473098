#include "chainspill/econometrics/garch.hpp"

#include "chainspill/econometrics/ols.hpp"
#include "chainspill/error.hpp"
#include "chainspill/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <tuple>

namespace chainspill::econ {

std::string GarchOrder::to_string() const {
    return "(" + std::to_string(p) + "," + std::to_string(o) + "," + std::to_string(q) + ")";
}

GarchOrder GjrParams::order() const noexcept {
    return {static_cast<int>(alpha.size()), static_cast<int>(gamma.size()), static_cast<int>(beta.size())};
}

double GjrParams::persistence() const noexcept {
    double s = 0.0;
    for (double a : alpha) s += a;
    for (double g : gamma) s += 0.5 * g;
    for (double b : beta) s += b;
    return s;
}

double GjrParams::unconditional_variance() const {
    const double pers = persistence();
    if (pers >= 1.0) fail(ErrorCode::InvalidArgument, "GJR process is not covariance stationary");
    return omega / (1.0 - pers);
}

double gjr_loglik(std::span<const double> e, const GjrParams& g, double backcast, std::vector<double>* sigma2,
                  std::vector<double>* terms) {
    static const double log2pi = std::log(2.0 * std::numbers::pi);
    const std::size_t n = e.size();
    const std::size_t p = g.alpha.size();
    const std::size_t o = g.gamma.size();
    const std::size_t q = g.beta.size();
    std::vector<double> local;
    std::vector<double>& s2 = sigma2 ? *sigma2 : local;
    s2.assign(n, 0.0);
    if (terms) terms->assign(n, 0.0);
    // Accumulated without the constant and in extended precision: finite
    // differences of this sum feed the standard errors.
    long double total = 0.0L;
    for (std::size_t t = 0; t < n; ++t) {
        double s = g.omega;
        for (std::size_t i = 1; i <= p; ++i) s += g.alpha[i - 1] * (t >= i ? e[t - i] * e[t - i] : backcast);
        for (std::size_t j = 1; j <= o; ++j) {
            const double v = t >= j ? (e[t - j] < 0.0 ? e[t - j] * e[t - j] : 0.0) : 0.5 * backcast;
            s += g.gamma[j - 1] * v;
        }
        for (std::size_t k = 1; k <= q; ++k) s += g.beta[k - 1] * (t >= k ? s2[t - k] : backcast);
        if (!(s > 0.0) || !std::isfinite(s)) return -std::numeric_limits<double>::infinity();
        s2[t] = s;
        const double core = std::log(s) + e[t] * e[t] / s;
        if (terms) (*terms)[t] = -0.5 * (log2pi + core);
        total += core;
    }
    return -0.5 * (static_cast<double>(n) * log2pi + static_cast<double>(total));
}

std::vector<std::string> FitResult::qualified_names() const {
    std::vector<std::string> out;
    for (const auto& n : mean_names) out.push_back("mean." + n);
    for (const auto& n : variance_names) out.push_back("variance." + n);
    return out;
}

std::optional<std::size_t> FitResult::mean_index(std::string_view name) const {
    for (std::size_t i = 0; i < mean_names.size(); ++i) {
        if (mean_names[i] == name) return i;
    }
    return std::nullopt;
}

DesignMatrix drop_missing_rows(const DesignMatrix& d) {
    const Eigen::Index n = d.y.size();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index t = 0; t < n; ++t) {
        bool ok = std::isfinite(d.y[t]);
        for (Eigen::Index j = 0; ok && j < d.X.cols(); ++j) ok = std::isfinite(d.X(t, j));
        if (ok) keep.push_back(t);
    }
    if (static_cast<Eigen::Index>(keep.size()) == n) return d;
    DesignMatrix out;
    out.y_name = d.y_name;
    out.names = d.names;
    out.labels = d.labels;
    out.X.resize(static_cast<Eigen::Index>(keep.size()), d.X.cols());
    out.y.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t r = 0; r < keep.size(); ++r) {
        const auto t = keep[r];
        out.X.row(static_cast<Eigen::Index>(r)) = d.X.row(t);
        out.y[static_cast<Eigen::Index>(r)] = d.y[t];
        if (!d.rows.empty()) out.rows.push_back(d.rows[static_cast<std::size_t>(t)]);
    }
    out.dropped = d.dropped + static_cast<std::size_t>(n) - keep.size();
    return out;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// y and the regressors are rescaled to unit size before optimisation so that
// one set of tolerances and restart scales fits every dataset.
struct Standardized {
    Matrix Z;  // first column is the intercept
    Vector y;
    double sy = 1.0;
    Vector sx;  // sx[0] = 1
    double backcast = 1.0;
    Vector b_ols;
};

Standardized standardize(const DesignMatrix& d) {
    const Eigen::Index n = d.y.size();
    const Eigen::Index k = d.X.cols();
    if (d.X.rows() != n) fail(ErrorCode::InvalidArgument, "design: X and y row counts differ");
    if (n <= k + 1) fail(ErrorCode::InsufficientData, "design has too few rows");
    Standardized s;
    const double mean = d.y.mean();
    const double sd = std::sqrt((d.y.array() - mean).square().sum() / static_cast<double>(n));
    if (!(sd > 0.0)) fail(ErrorCode::ZeroVariance, "dependent variable '" + d.y_name + "' is constant");
    s.sy = sd;
    s.y = d.y / sd;
    s.sx.resize(k + 1);
    s.sx[0] = 1.0;
    s.Z.resize(n, k + 1);
    s.Z.col(0).setOnes();
    for (Eigen::Index j = 0; j < k; ++j) {
        const double rms = std::sqrt(d.X.col(j).squaredNorm() / static_cast<double>(n));
        if (!(rms > 0.0)) {
            const std::string name = j < static_cast<Eigen::Index>(d.names.size()) ? d.names[j] : std::to_string(j);
            fail(ErrorCode::SingularDesign, "column '" + name + "' is identically zero");
        }
        s.sx[j + 1] = rms;
        s.Z.col(j + 1) = d.X.col(j) / rms;
    }
    const OlsResult fit = ols(s.Z, s.y);
    s.b_ols = fit.beta;
    s.backcast = fit.ssr / static_cast<double>(n);
    if (!(s.backcast > 0.0)) fail(ErrorCode::SingularDesign, "design fits the dependent variable exactly");
    return s;
}

void softmax_with_slack(const double* u, int m, double* x) {
    double mx = 0.0;
    for (int i = 0; i < m; ++i) mx = std::max(mx, u[i]);
    double denom = std::exp(-mx);
    for (int i = 0; i < m; ++i) denom += std::exp(u[i] - mx);
    for (int i = 0; i < m; ++i) x[i] = kPersistenceCap * std::exp(u[i] - mx) / denom;
}

class Problem {
public:
    Problem(const Standardized& s, GarchOrder order) : s_(s), order_(order) {}

    [[nodiscard]] int n_mean() const noexcept { return static_cast<int>(s_.Z.cols()); }
    [[nodiscard]] int n_var() const noexcept { return 1 + order_.total(); }
    [[nodiscard]] int size() const noexcept { return n_mean() + n_var(); }
    [[nodiscard]] double n() const noexcept { return static_cast<double>(s_.y.size()); }

    // v = [log omega, components...]; components are the (slack-augmented)
    // softmax shares a', h', b with alpha_i = a'_i / (1 - [i <= o]/2),
    // gamma_j = 2 h'_j - alpha_j, beta_k = b_k. Their sum equals the persistence.
    [[nodiscard]] GjrParams variance(const double* v) const {
        const int p = order_.p, o = order_.o, q = order_.q;
        std::vector<double> x(static_cast<std::size_t>(order_.total()));
        softmax_with_slack(v + 1, order_.total(), x.data());
        GjrParams g;
        g.omega = std::exp(v[0]);
        for (int i = 0; i < p; ++i) g.alpha.push_back(i < o ? 2.0 * x[i] : x[i]);
        for (int j = 0; j < o; ++j) g.gamma.push_back(2.0 * x[p + j] - (j < p ? g.alpha[j] : 0.0));
        for (int k = 0; k < q; ++k) g.beta.push_back(x[p + o + k]);
        return g;
    }

    [[nodiscard]] Vector unconstrained_variance(const GjrParams& g) const {
        const int p = order_.p, o = order_.o, q = order_.q;
        std::vector<double> x;
        for (int i = 0; i < p; ++i) x.push_back(i < o ? 0.5 * g.alpha[i] : g.alpha[i]);
        for (int j = 0; j < o; ++j) x.push_back(0.5 * (g.gamma[j] + (j < p ? g.alpha[j] : 0.0)));
        for (int k = 0; k < q; ++k) x.push_back(g.beta[k]);
        double sum = 0.0;
        for (double& v : x) {
            v = std::max(v, 1e-6);
            sum += v;
        }
        if (sum > 0.99 * kPersistenceCap) {
            for (double& v : x) v *= 0.99 * kPersistenceCap / sum;
            sum = 0.99 * kPersistenceCap;
        }
        const double slack = kPersistenceCap - sum;
        Vector out(n_var());
        out[0] = std::log(std::max(g.omega, 1e-12));
        for (std::size_t m = 0; m < x.size(); ++m) out[static_cast<Eigen::Index>(m) + 1] = std::log(x[m] / slack);
        return out;
    }

    [[nodiscard]] Vector residuals(const Vector& u) const { return s_.y - s_.Z * u.head(n_mean()); }

    [[nodiscard]] double negloglik(const Vector& u) const {
        const Vector e = residuals(u);
        return -gjr_loglik({e.data(), static_cast<std::size_t>(e.size())}, variance(u.data() + n_mean()),
                           s_.backcast) /
               n();
    }

    // Central differences; a mean-coefficient probe shifts the residuals by a
    // multiple of one column instead of recomputing Z b.
    [[nodiscard]] Vector gradient(const Vector& u, double rel) const {
        const Vector e = residuals(u);
        const GjrParams g = variance(u.data() + n_mean());
        const auto f = [&](const Vector& res, const GjrParams& params) {
            return -gjr_loglik({res.data(), static_cast<std::size_t>(res.size())}, params, s_.backcast) / n();
        };
        Vector grad(size());
        for (int j = 0; j < n_mean(); ++j) {
            const double h = rel * std::max(1.0, std::abs(u[j]));
            const Vector up = e - h * s_.Z.col(j);
            const Vector dn = e + h * s_.Z.col(j);
            grad[j] = (f(up, g) - f(dn, g)) / (2.0 * h);
        }
        Vector v = u.tail(n_var());
        for (int i = 0; i < n_var(); ++i) {
            const double h = rel * std::max(1.0, std::abs(v[i]));
            const double v0 = v[i];
            v[i] = v0 + h;
            const double fu = f(e, variance(v.data()));
            v[i] = v0 - h;
            const double fd = f(e, variance(v.data()));
            v[i] = v0;
            grad[n_mean() + i] = (fu - fd) / (2.0 * h);
        }
        return grad;
    }

    // theta = [b, omega, alpha, gamma, beta] in standardised units.
    [[nodiscard]] double loglik_natural(const Vector& theta, std::vector<double>* terms = nullptr) const {
        const Vector e = s_.y - s_.Z * theta.head(n_mean());
        GjrParams g;
        int at = n_mean();
        g.omega = theta[at++];
        for (int i = 0; i < order_.p; ++i) g.alpha.push_back(theta[at++]);
        for (int j = 0; j < order_.o; ++j) g.gamma.push_back(theta[at++]);
        for (int k = 0; k < order_.q; ++k) g.beta.push_back(theta[at++]);
        return gjr_loglik({e.data(), static_cast<std::size_t>(e.size())}, g, s_.backcast, nullptr, terms);
    }

    [[nodiscard]] Vector natural(const Vector& u) const {
        const GjrParams g = variance(u.data() + n_mean());
        Vector theta(size());
        theta.head(n_mean()) = u.head(n_mean());
        int at = n_mean();
        theta[at++] = g.omega;
        for (double a : g.alpha) theta[at++] = a;
        for (double c : g.gamma) theta[at++] = c;
        for (double b : g.beta) theta[at++] = b;
        return theta;
    }

    [[nodiscard]] Vector default_variance_start() const {
        GjrParams g;
        const int p = order_.p, o = order_.o, q = order_.q;
        for (int i = 0; i < p; ++i) g.alpha.push_back((q > 0 ? 0.08 : 0.2) / p);
        for (int j = 0; j < o; ++j) g.gamma.push_back(0.08 / o);
        for (int k = 0; k < q; ++k) g.beta.push_back(0.8 / q);
        g.omega = s_.backcast * (1.0 - std::min(g.persistence(), 0.95));
        return unconstrained_variance(g);
    }

    [[nodiscard]] const Standardized& data() const noexcept { return s_; }
    [[nodiscard]] GarchOrder order() const noexcept { return order_; }

private:
    const Standardized& s_;
    GarchOrder order_;
};

std::uint64_t order_seed(std::uint64_t seed, GarchOrder o) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(1 + o.p * 16 + o.o * 4 + o.q);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct Optimum {
    Vector u;
    double value = 0.0;
    double gradient_norm = 0.0;
};

Optimum optimise(const Problem& prob, const GarchOptions& options) {
    BfgsOptions bopts;
    bopts.max_iterations = options.max_iterations;
    bopts.rel_tol = options.rel_tol;
    const int nm = prob.n_mean();
    const Vector b_ols = prob.data().b_ols;

    // Two-step warm start: variance parameters on the OLS residuals.
    const Objective var_only = [&](const Vector& v) {
        Vector u(prob.size());
        u << b_ols, v;
        return prob.negloglik(u);
    };
    const BfgsResult vfit = minimize_bfgs(var_only, prob.default_variance_start(), bopts);
    Vector start(prob.size());
    start << b_ols, vfit.x;
    if (options.two_step) return {start, vfit.value, vfit.gradient_norm()};

    const Objective f = [&](const Vector& u) { return prob.negloglik(u); };
    const Gradient g = [&](const Vector& u) { return prob.gradient(u, bopts.fd_step); };
    BfgsResult best = minimize_bfgs(f, g, start, bopts);

    std::mt19937_64 rng(order_seed(options.seed, prob.order()));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int r = 0; r < options.restarts; ++r) {
        Vector x = start;
        for (int j = 0; j < nm; ++j) x[j] += 0.05 * normal(rng);
        x[nm] += 0.5 * normal(rng);
        for (int i = nm + 1; i < prob.size(); ++i) x[i] += normal(rng);
        try {
            BfgsResult cand = minimize_bfgs(f, g, x, bopts);
            if (cand.value < best.value) best = std::move(cand);
        } catch (const Error&) {
            // restart landed where the objective is not finite
        }
    }
    return {best.x, best.value, best.gradient_norm()};
}

// Damped Newton steps from the quasi-Newton optimum. BFGS stops on objective
// stalls, which leaves the point loose at roughly sqrt(rel_tol); inference
// wants it pinned down.
Optimum polish(const Problem& prob, Optimum opt) {
    const Objective f = [&](const Vector& u) { return prob.negloglik(u); };
    const int m = prob.size();
    for (int iter = 0; iter < 8; ++iter) {
        const Vector g = prob.gradient(opt.u, 1e-5);
        opt.gradient_norm = g.lpNorm<Eigen::Infinity>();
        if (!(opt.gradient_norm > 1e-10)) break;
        Vector steps(m);
        for (int i = 0; i < m; ++i) steps[i] = 1e-4 * std::max(1.0, std::abs(opt.u[i]));
        Matrix H = central_hessian(f, opt.u, steps);
        H = 0.5 * (H + H.transpose());
        if (!H.allFinite()) break;
        Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
        const Vector lam = eig.eigenvalues();
        const double shift = std::max(0.0, -lam.minCoeff()) + 1e-8 * std::max(1.0, lam.maxCoeff());
        Vector d = -(eig.eigenvectors() *
                     (eig.eigenvectors().transpose() * g).cwiseQuotient((lam.array() + shift).matrix()));
        const double big = d.lpNorm<Eigen::Infinity>();
        if (big > 1.0) d /= big;
        bool moved = false;
        for (double t = 1.0; t > 1e-3; t *= 0.5) {
            const Vector cand = opt.u + t * d;
            const double fc = f(cand);
            if (std::isfinite(fc) && fc <= opt.value) {
                opt.u = cand;
                opt.value = fc;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    opt.gradient_norm = prob.gradient(opt.u, 1e-5).lpNorm<Eigen::Infinity>();
    return opt;
}

FitResult assemble(const DesignMatrix& d, const Problem& prob, const Optimum& opt, const GarchOptions& options,
                   bool inference) {
    const Standardized& s = prob.data();
    const GarchOrder order = prob.order();
    const int nm = prob.n_mean();
    const auto n = static_cast<std::size_t>(s.y.size());
    const double sy = s.sy;

    FitResult r;
    r.order = order;
    r.n_obs = n;
    r.n_params = static_cast<std::size_t>(prob.size());
    r.optimizer_point = opt.u;
    r.gradient_norm = opt.gradient_norm;
    r.converged = opt.gradient_norm <= options.gradient_tol;

    r.mean_names.push_back("alpha_0");
    for (const auto& name : d.names) r.mean_names.push_back(name);
    r.mean_coefficients.resize(nm);
    for (int j = 0; j < nm; ++j) r.mean_coefficients[j] = opt.u[j] * sy / s.sx[j];

    const GjrParams gs = prob.variance(opt.u.data() + nm);
    r.variance = gs;
    r.variance.omega = gs.omega * sy * sy;
    r.variance_names.push_back("omega");
    for (int i = 1; i <= order.p; ++i) r.variance_names.push_back("alpha_" + std::to_string(i));
    for (int j = 1; j <= order.o; ++j) r.variance_names.push_back("gamma_" + std::to_string(j));
    for (int k = 1; k <= order.q; ++k) r.variance_names.push_back("beta_" + std::to_string(k));
    r.variance_coefficients.resize(prob.n_var());
    {
        int at = 0;
        r.variance_coefficients[at++] = r.variance.omega;
        for (double a : r.variance.alpha) r.variance_coefficients[at++] = a;
        for (double c : r.variance.gamma) r.variance_coefficients[at++] = c;
        for (double b : r.variance.beta) r.variance_coefficients[at++] = b;
    }
    r.stationarity_boundary = gs.persistence() >= kBoundaryFlag;

    // Natural-unit residuals and variances.
    r.residuals = d.y - d.X * r.mean_coefficients.tail(nm - 1);
    r.residuals.array() -= r.mean_coefficients[0];
    std::vector<double> s2;
    const Vector es = s.y - s.Z * opt.u.head(nm);
    const double ll_std = gjr_loglik({es.data(), n}, gs, s.backcast, &s2);
    r.conditional_variance = Eigen::Map<const Vector>(s2.data(), static_cast<Eigen::Index>(n)) * (sy * sy);
    r.loglik = ll_std - static_cast<double>(n) * std::log(sy);
    const double k = static_cast<double>(r.n_params);
    r.aic = 2.0 * k - 2.0 * r.loglik;
    r.bic = k * std::log(static_cast<double>(n)) - 2.0 * r.loglik;
    const double sst = (d.y.array() - d.y.mean()).square().sum();
    const double ssr = r.residuals.squaredNorm();
    r.r2 = 1.0 - ssr / sst;
    const double regs = static_cast<double>(nm - 1);
    r.adj_r2 = 1.0 - (1.0 - r.r2) * (static_cast<double>(n) - 1.0) / (static_cast<double>(n) - regs - 1.0);

    const int m = prob.size();
    r.mean_std_errors = Vector::Constant(nm, kNaN);
    r.variance_std_errors = Vector::Constant(prob.n_var(), kNaN);
    if (inference) {
        const Vector theta = prob.natural(opt.u);
        Vector steps(m);
        for (int i = 0; i < m; ++i) steps[i] = 1e-3 * std::max(std::abs(theta[i]), 1e-2);
        const Objective ll = [&](const Vector& th) { return prob.loglik_natural(th); };
        const Matrix info = -central_hessian(ll, theta, steps);
        Eigen::FullPivLU<Matrix> lu(info);
        Vector scale(m);
        for (int j = 0; j < nm; ++j) scale[j] = sy / s.sx[j];
        scale[nm] = sy * sy;
        for (int i = nm + 1; i < m; ++i) scale[i] = 1.0;
        if (info.allFinite() && lu.isInvertible()) {
            const Matrix cov = lu.inverse();
            for (int i = 0; i < m; ++i) {
                const double v = cov(i, i);
                const double se = v > 0.0 ? std::sqrt(v) * scale[i] : kNaN;
                if (i < nm) {
                    r.mean_std_errors[i] = se;
                } else {
                    r.variance_std_errors[i - nm] = se;
                }
            }
            if (options.robust) {
                // Outer product of per-observation scores, sandwiched by the inverse information.
                Matrix scores(static_cast<Eigen::Index>(n), m);
                std::vector<double> up, dn;
                Vector th = theta;
                for (int i = 0; i < m; ++i) {
                    th[i] = theta[i] + steps[i];
                    (void)prob.loglik_natural(th, &up);
                    th[i] = theta[i] - steps[i];
                    (void)prob.loglik_natural(th, &dn);
                    th[i] = theta[i];
                    for (std::size_t t = 0; t < n; ++t) {
                        scores(static_cast<Eigen::Index>(t), i) = (up[t] - dn[t]) / (2.0 * steps[i]);
                    }
                }
                const Matrix sandwich = cov * (scores.transpose() * scores) * cov;
                r.mean_robust_tstats.resize(nm);
                r.variance_robust_tstats.resize(prob.n_var());
                for (int i = 0; i < m; ++i) {
                    const double v = sandwich(i, i);
                    const double t = v > 0.0 ? theta[i] / std::sqrt(v) : kNaN;
                    if (i < nm) {
                        r.mean_robust_tstats[i] = t;
                    } else {
                        r.variance_robust_tstats[i - nm] = t;
                    }
                }
            }
        }
    }
    r.mean_tstats = r.mean_coefficients.cwiseQuotient(r.mean_std_errors);
    r.variance_tstats = r.variance_coefficients.cwiseQuotient(r.variance_std_errors);
    return r;
}

void check_preconditions(const DesignMatrix& d, GarchOrder order, const GarchOptions& options) {
    if (order.p < 0 || order.o < 0 || order.q < 0) fail(ErrorCode::InvalidArgument, "negative GARCH order");
    if (!options.enforce_min_obs) return;
    const std::size_t need = 20 * (d.columns() + static_cast<std::size_t>(order.total()) + 1);
    if (d.n_obs() < need) {
        fail(ErrorCode::InsufficientData, "GJR" + order.to_string() + " with " + std::to_string(d.columns()) +
                                              " regressors needs " + std::to_string(need) + " observations, have " +
                                              std::to_string(d.n_obs()));
    }
}

FitResult fit_clean(const DesignMatrix& d, const Standardized& s, GarchOrder order, const GarchOptions& options,
                    bool inference) {
    check_preconditions(d, order, options);
    const Problem prob(s, order);
    Optimum opt = optimise(prob, options);
    if (inference && !options.two_step) opt = polish(prob, opt);
    FitResult r = assemble(d, prob, opt, options, inference);
    if (!r.converged && !options.allow_nonconverged) {
        fail(ErrorCode::NonConvergence, "GJR" + order.to_string() + " stopped at gradient norm " +
                                            std::to_string(r.gradient_norm) + " (loglik " +
                                            std::to_string(r.loglik) + ")");
    }
    return r;
}

}  // namespace

FitResult fit_garch_regression(const DesignMatrix& design, GarchOrder order, const GarchOptions& options) {
    const DesignMatrix d = drop_missing_rows(design);
    const Standardized s = standardize(d);
    return fit_clean(d, s, order, options, true);
}

Objective garch_objective(const DesignMatrix& design, GarchOrder order) {
    auto d = std::make_shared<DesignMatrix>(drop_missing_rows(design));
    auto s = std::make_shared<Standardized>(standardize(*d));
    auto prob = std::make_shared<Problem>(*s, order);
    return [d, s, prob](const Vector& u) { return prob->negloglik(u); };
}

std::vector<GarchOrder> OrderBounds::enumerate() const {
    std::vector<GarchOrder> out;
    for (int p = p_min; p <= p_max; ++p) {
        for (int o = o_min; o <= o_max; ++o) {
            for (int q = q_min; q <= q_max; ++q) out.push_back({p, o, q});
        }
    }
    return out;
}

OrderSelection select_garch_order(const DesignMatrix& design, const OrderBounds& bounds, const GarchOptions& options,
                                  int jobs) {
    const auto orders = bounds.enumerate();
    if (orders.empty()) fail(ErrorCode::InvalidArgument, "empty GARCH order bounds");
    const DesignMatrix d = drop_missing_rows(design);
    const Standardized s = standardize(d);

    GarchOptions cand_opts = options;
    cand_opts.allow_nonconverged = true;
    cand_opts.robust = false;
    std::vector<CandidateSummary> summary(orders.size());
    std::vector<Vector> points(orders.size());
    kernels::parallel_for(orders.size(), jobs, [&](std::size_t i) {
        summary[i].order = orders[i];
        try {
            FitResult r = fit_clean(d, s, orders[i], cand_opts, false);
            summary[i].aic = r.aic;
            summary[i].converged = r.converged;
            if (!r.converged) summary[i].error = "NonConvergence: gradient norm " + std::to_string(r.gradient_norm);
            points[i] = std::move(r.optimizer_point);
        } catch (const Error& e) {
            summary[i].error = e.what();
        }
    });

    std::optional<std::size_t> best;
    const auto key = [&](std::size_t i) {
        const GarchOrder& o = summary[i].order;
        return std::make_tuple(summary[i].aic, o.total(), o.p, o.o, o.q);
    };
    for (std::size_t i = 0; i < summary.size(); ++i) {
        if (!summary[i].converged) continue;
        if (!best || key(i) < key(*best)) best = i;
    }
    if (!best) {
        std::string detail;
        for (const auto& c : summary) detail += " " + c.order.to_string() + ": " + c.error + ";";
        fail(ErrorCode::NonConvergence, "every candidate GARCH order failed:" + detail);
    }
    const Problem prob(s, summary[*best].order);
    Optimum opt{points[*best], prob.negloglik(points[*best]),
                prob.gradient(points[*best], 1e-5).lpNorm<Eigen::Infinity>()};
    if (!options.two_step) opt = polish(prob, opt);
    OrderSelection out{assemble(d, prob, opt, options, true), std::move(summary)};
    return out;
}

}  // namespace chainspill::econ

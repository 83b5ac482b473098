#include "chainspill/econometrics/arima.hpp"
#include "chainspill/econometrics/diagnostics.hpp"
#include "chainspill/econometrics/garch.hpp"
#include "chainspill/econometrics/ols.hpp"
#include "chainspill/econometrics/optimizer.hpp"
#include "chainspill/error.hpp"
#include "chainspill/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace chainspill;
using namespace chainspill::econ;

namespace {

std::vector<double> normals(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = z(rng);
    return v;
}

std::vector<double> ar1(std::size_t n, double phi, std::uint64_t seed) {
    const auto e = normals(n + 200, seed);
    std::vector<double> y;
    double v = 0.0;
    for (std::size_t t = 0; t < e.size(); ++t) {
        v = phi * v + e[t];
        if (t >= 200) y.push_back(v);
    }
    return y;
}

// Gauss-Jordan on the normal equations, kept apart from the QR path under test.
std::vector<double> normal_equations(const Matrix& X, const Vector& y) {
    const auto k = static_cast<std::size_t>(X.cols()) + 1;
    std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
    for (Eigen::Index t = 0; t < X.rows(); ++t) {
        std::vector<double> row{1.0};
        for (Eigen::Index j = 0; j < X.cols(); ++j) row.push_back(X(t, j));
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) a[i][j] += row[i] * row[j];
            a[i][k] += row[i] * y[t];
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < k; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        }
        std::swap(a[c], a[piv]);
        for (std::size_t r = 0; r < k; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t j = c; j <= k; ++j) a[r][j] -= f * a[c][j];
        }
    }
    std::vector<double> b(k);
    for (std::size_t i = 0; i < k; ++i) b[i] = a[i][k] / a[i][i];
    return b;
}

DesignMatrix homoskedastic_design(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    DesignMatrix d;
    d.y_name = "y";
    d.names = {"x1", "x2", "x3"};
    d.X.resize(static_cast<Eigen::Index>(n), 3);
    d.y.resize(static_cast<Eigen::Index>(n));
    for (std::size_t t = 0; t < n; ++t) {
        const auto i = static_cast<Eigen::Index>(t);
        d.X(i, 0) = z(rng);
        d.X(i, 1) = 0.5 * d.X(i, 0) + z(rng);
        d.X(i, 2) = 3.0 + z(rng);
        d.y(i) = 0.2 + 0.8 * d.X(i, 0) - 0.3 * d.X(i, 1) + 0.1 * d.X(i, 2) + 0.5 * z(rng);
        d.rows.push_back(HalfDayId::from_ordinal(39000 + static_cast<std::int64_t>(t)));
    }
    return d;
}

GjrParams gjr(double w, double a, double g, double b) {
    GjrParams p;
    p.omega = w;
    p.alpha = {a};
    if (g != 0.0) p.gamma = {g};
    p.beta = {b};
    return p;
}

// Plain GARCH(1,1) likelihood with the same pre-sample convention.
double garch11_loglik(const std::vector<double>& e, double w, double a, double b, double backcast) {
    double ll = 0.0, s2 = backcast, e2 = backcast;
    for (double x : e) {
        s2 = w + a * e2 + b * s2;
        ll += -0.5 * (std::log(2.0 * M_PI) + std::log(s2) + x * x / s2);
        e2 = x * x;
    }
    return ll;
}

}  // namespace

TEST_SUITE("econometrics") {

TEST_CASE("bfgs minimises the Rosenbrock function") {
    const Objective f = [](const Vector& x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    Vector x0(2);
    x0 << -1.2, 1.0;
    BfgsOptions o;
    o.rel_tol = 1e-14;
    const auto r = minimize_bfgs(f, x0, o);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.value < 1e-8);
    Vector bad(1);
    bad << 0.0;
    CHECK_THROWS_AS((void)minimize_bfgs([](const Vector&) { return std::nan(""); }, bad), Error);
}

TEST_CASE("ols matches the normal-equations oracle") {
    const auto d = homoskedastic_design(500, 3);
    Matrix X(d.X.rows(), 4);
    X.col(0).setOnes();
    X.rightCols(3) = d.X;
    const auto r = ols(X, d.y);
    const auto b = normal_equations(d.X, d.y);
    for (std::size_t i = 0; i < 4; ++i) CHECK(r.beta[static_cast<Eigen::Index>(i)] == doctest::Approx(b[i]).epsilon(1e-9));
    Matrix dup(10, 2);
    dup.col(0).setOnes();
    dup.col(1).setOnes();
    CHECK_THROWS_AS((void)ols(dup, Vector::Ones(10)), Error);
    CHECK_THROWS_AS((void)ols(Matrix::Ones(2, 2), Vector::Ones(2)), Error);
}

TEST_CASE("arima white noise") {
    const auto f = fit_arima(normals(2000, 1), {0, 0, 0});
    CHECK(std::abs(f.intercept) <= 0.05);
    CHECK(std::abs(f.sigma2 - 1.0) <= 0.1);
    CHECK(f.aic == doctest::Approx(2.0 * 2 - 2.0 * f.loglik));
}

TEST_CASE("arima AR(1) coefficient") {
    const auto f = fit_arima(ar1(4000, 0.7, 2), {1, 0, 0});
    CHECK(std::abs(f.ar[0] - 0.7) <= 0.04);
    CHECK(f.gradient_norm <= 1e-4);
    CHECK(std::isnan(f.residuals[0]));
}

TEST_CASE("arima on a trend: differenced intercept is the slope") {
    const auto e = normals(1000, 4);
    std::vector<double> y;
    for (std::size_t t = 0; t < e.size(); ++t) y.push_back(0.25 * static_cast<double>(t) + 0.1 * e[t]);
    const auto f = fit_arima(y, {0, 1, 0});
    CHECK(f.intercept == doctest::Approx(0.25).epsilon(0.01));
    CHECK_THROWS_AS((void)fit_arima(std::vector<double>(5, 1.0), {1, 0, 0}), Error);
    CHECK_THROWS_AS((void)fit_arima(std::vector<double>(100, 1.0), {0, 0, 0}), Error);
}

TEST_CASE("pacf map and differencing") {
    const std::vector<double> one{0.5};
    CHECK(pacf_to_ar(one)[0] == 0.5);
    const std::vector<double> two{0.5, 0.2};
    const auto ar = pacf_to_ar(two);
    CHECK(ar[0] == doctest::Approx(0.5 - 0.2 * 0.5));
    CHECK(ar[1] == doctest::Approx(0.2));
    const std::vector<double> y{1, 4, 9, 16};
    CHECK(difference(y, 1) == std::vector<double>{3, 5, 7});
    CHECK(difference(y, 2) == std::vector<double>{2, 2});
}

TEST_CASE("arma fits stay stationary and invertible") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto f = fit_arima(ar1(800, 0.95, 30 + seed), {2, 0, 2});
        // Companion eigenvalues of the AR part inside the unit circle.
        Matrix C = Matrix::Zero(2, 2);
        C(0, 0) = f.ar[0];
        C(0, 1) = f.ar[1];
        C(1, 0) = 1.0;
        CHECK(C.eigenvalues().cwiseAbs().maxCoeff() < 1.0);
        Matrix M = Matrix::Zero(2, 2);
        M(0, 0) = -f.ma[0];
        M(0, 1) = -f.ma[1];
        M(1, 0) = 1.0;
        CHECK(M.eigenvalues().cwiseAbs().maxCoeff() <= 1.0);
    }
}

TEST_CASE("leverage-free GJR likelihood equals symmetric GARCH") {
    const auto e = normals(500, 6);
    const double ll = gjr_loglik(e, gjr(0.1, 0.1, 0.0, 0.8), 1.0);
    CHECK(ll == doctest::Approx(garch11_loglik(e, 0.1, 0.1, 0.8, 1.0)).epsilon(1e-12));
    GjrParams neg = gjr(-1.0, 0.1, 0.0, 0.8);
    CHECK(std::isinf(gjr_loglik(e, neg, 1.0)));
}

TEST_CASE("degenerate variance order reproduces OLS") {
    const auto d = homoskedastic_design(800, 12);
    const auto fit = fit_garch_regression(d, {0, 0, 0});
    const auto b = normal_equations(d.X, d.y);
    for (std::size_t i = 0; i < b.size(); ++i) {
        CHECK(fit.mean_coefficients[static_cast<Eigen::Index>(i)] == doctest::Approx(b[i]).epsilon(1e-2));
    }
    CHECK(fit.mean_names.front() == "alpha_0");
    CHECK(fit.variance_names == std::vector<std::string>{"omega"});
}

TEST_CASE("joint QMLE recovers GJR parameters") {
    const auto truth = gjr(0.05, 0.10, 0.10, 0.80);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto d = synth::simulate_gjr_regression(4000, 0.5, truth, seed);
        const auto fit = fit_garch_regression(d, {1, 1, 1});
        CHECK(fit.converged);
        CHECK(std::abs(fit.mean_coefficients[1] - 0.5) <= 0.08);
        CHECK(std::abs(fit.variance.omega - 0.05) <= 0.08);
        CHECK(std::abs(fit.variance.alpha[0] - 0.10) <= 0.08);
        CHECK(std::abs(fit.variance.gamma[0] - 0.10) <= 0.08);
        CHECK(std::abs(fit.variance.beta[0] - 0.80) <= 0.08);
        CHECK(fit.gradient_norm <= 1e-4);
        for (Eigen::Index t = 0; t < fit.conditional_variance.size(); ++t) CHECK(fit.conditional_variance[t] > 0.0);
        CHECK(fit.variance.persistence() <= kPersistenceCap);
        CHECK(fit.variance.alpha[0] + fit.variance.gamma[0] >= 0.0);
        CHECK(fit.aic == doctest::Approx(2.0 * static_cast<double>(fit.n_params) - 2.0 * fit.loglik));
        CHECK(fit.r2 <= 1.0);
        CHECK(fit.qualified_names().size() == fit.mean_names.size() + fit.variance_names.size());
        for (Eigen::Index i = 0; i < fit.mean_tstats.size(); ++i) {
            CHECK(fit.mean_tstats[i] == doctest::Approx(fit.mean_coefficients[i] / fit.mean_std_errors[i]));
        }
    }
}

TEST_CASE("gradient at the optimum agrees with finite differences") {
    for (std::uint64_t seed = 10; seed < 13; ++seed) {
        const auto d = synth::simulate_gjr_regression(1500, -0.3, gjr(0.05, 0.08, 0.12, 0.75), seed);
        const auto fit = fit_garch_regression(d, {1, 1, 1});
        const auto f = garch_objective(d, {1, 1, 1});
        const Vector g = central_gradient(f, fit.optimizer_point, 1e-6);
        CHECK(g.lpNorm<Eigen::Infinity>() <= 1e-4);
    }
}

TEST_CASE("rescaling y rescales coefficients and leaves t-statistics alone") {
    const auto d = synth::simulate_gjr_regression(1200, 0.5, gjr(0.05, 0.10, 0.10, 0.80), 77);
    auto scaled = d;
    const double c = 37.5;
    scaled.y *= c;
    const auto a = fit_garch_regression(d, {1, 1, 1});
    const auto b = fit_garch_regression(scaled, {1, 1, 1});
    for (Eigen::Index i = 0; i < a.mean_coefficients.size(); ++i) {
        CHECK(b.mean_coefficients[i] == doctest::Approx(c * a.mean_coefficients[i]).epsilon(1e-6));
        CHECK(std::abs(b.mean_tstats[i] - a.mean_tstats[i]) <= 1e-6 * std::max(1.0, std::abs(a.mean_tstats[i])));
    }
    CHECK(b.variance.omega == doctest::Approx(c * c * a.variance.omega).epsilon(1e-6));
    for (Eigen::Index i = 0; i < a.variance_tstats.size(); ++i) {
        CHECK(std::abs(b.variance_tstats[i] - a.variance_tstats[i]) <= 1e-6 * std::max(1.0, std::abs(a.variance_tstats[i])));
    }
}

TEST_CASE("single-order bounds reduce to one fit") {
    const auto d = synth::simulate_gjr_regression(1000, 0.5, gjr(0.05, 0.10, 0.10, 0.80), 5);
    OrderBounds one{1, 1, 1, 1, 1, 1};
    const auto sel = select_garch_order(d, one);
    const auto fit = fit_garch_regression(d, {1, 1, 1});
    REQUIRE(sel.candidates.size() == 1);
    CHECK(sel.fit.order == GarchOrder{1, 1, 1});
    CHECK(sel.fit.loglik == doctest::Approx(fit.loglik).epsilon(1e-10));
    for (Eigen::Index i = 0; i < fit.mean_coefficients.size(); ++i) {
        CHECK(sel.fit.mean_coefficients[i] == doctest::Approx(fit.mean_coefficients[i]).epsilon(1e-8));
    }
}

TEST_CASE("AIC picks the generating order most of the time") {
    // Reduced grid around the truth to keep the unit suite quick.
    OrderBounds bounds{1, 2, 0, 1, 1, 2};
    int hits = 0;
    const int seeds = 10;
    for (int s = 0; s < seeds; ++s) {
        const auto d = synth::simulate_gjr_regression(4000, 0.5, gjr(0.05, 0.05, 0.15, 0.80), 500 + s);
        hits += select_garch_order(d, bounds, {}, 2).fit.order == GarchOrder{1, 1, 1};
    }
    CHECK(hits >= 6);
}

TEST_CASE("minimum observations and design errors") {
    const auto d = synth::simulate_gjr_regression(50, 0.5, gjr(0.05, 0.10, 0.10, 0.80), 1);
    CHECK_THROWS_AS((void)fit_garch_regression(d, {1, 1, 1}), Error);
    auto zero = synth::simulate_gjr_regression(500, 0.5, gjr(0.05, 0.10, 0.10, 0.80), 1);
    zero.X.setZero();
    CHECK_THROWS_AS((void)fit_garch_regression(zero, {1, 0, 1}), Error);
    auto holes = synth::simulate_gjr_regression(100, 0.5, gjr(0.05, 0.10, 0.10, 0.80), 1);
    holes.y[3] = kMissing;
    holes.X(7, 0) = kMissing;
    const auto clean = drop_missing_rows(holes);
    CHECK(clean.n_obs() == 98);
    CHECK(clean.dropped == 2);
}

TEST_CASE("star thresholds and formatting") {
    CHECK(stars(significance_from_t(-2.491)) == "**");
    CHECK(stars(significance_from_t(-1.661)) == "*");
    CHECK(stars(significance_from_t(2.6)) == "***");
    CHECK(stars(significance_from_t(1.5)).empty());
    CHECK(format_with_stars(-18.1133, 4, Significance::One) == "-18.1133***");
}

TEST_CASE("describe and Jarque-Bera") {
    const double a = 1.0 + std::sqrt(2.0);
    const std::vector<double> mesokurtic{-a, -1, 0, 0, 0, 0, 1, a};
    const auto m = describe(mesokurtic);
    CHECK(std::abs(m.skewness) < 1e-12);
    CHECK(std::abs(m.excess_kurtosis) < 1e-12);
    CHECK(jarque_bera(mesokurtic).statistic == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
    CHECK_THROWS_AS((void)jarque_bera(std::vector<double>(10, 2.0)), Error);

    std::mt19937_64 rng(8);
    std::student_t_distribution<double> t3(3.0);
    int above = 0;
    for (int s = 0; s < 50; ++s) {
        std::vector<double> x(2000);
        for (double& v : x) v = t3(rng);
        above += jarque_bera(x).statistic > 9.21;
    }
    CHECK(above >= 49);
}

TEST_CASE("ADF critical values and decisions") {
    CHECK(adf_critical_value(1, 100000000) == doctest::Approx(-3.43035).epsilon(1e-4));
    CHECK(adf_critical_value(5, 100000000) == doctest::Approx(-2.86154).epsilon(1e-4));
    CHECK(adf_critical_value(10, 100000000) == doctest::Approx(-2.56677).epsilon(1e-4));
    CHECK(adf_critical_value(5, 100) < adf_critical_value(5, 100000));
    int reject = 0, keep = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto e = normals(2000, 300 + s);
        reject += adf_test(e).level == Significance::One;
        std::vector<double> w{0.0};
        for (double v : e) w.push_back(w.back() + v);
        keep += adf_test(w).level < Significance::Five;
    }
    CHECK(reject == 10);
    CHECK(keep >= 8);
    CHECK_THROWS_AS((void)adf_test(normals(10, 1)), Error);
}

TEST_CASE("Ljung-Box") {
    int rejections = 0;
    for (std::uint64_t s = 0; s < 200; ++s) rejections += ljung_box(normals(500, 900 + s), 10).p_value < 0.05;
    CHECK(rejections >= 2);
    CHECK(rejections <= 20);
    CHECK(ljung_box(ar1(1000, 0.8, 3), 10).p_value < 0.01);
    CHECK_THROWS_AS((void)ljung_box(normals(20, 1), 10), Error);
    CHECK(ljung_box(normals(500, 1), 10, 2).df == 8);
}

}

#include "chainspill/econometrics/optimizer.hpp"

#include "chainspill/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chainspill::econ {

namespace {

double safe_eval(const Objective& f, const Vector& x, int& evals) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

Vector gradient_counted(const Objective& f, const Vector& x, double rel_step, int& evals) {
    Vector g(x.size());
    Vector probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = rel_step * std::max(1.0, std::abs(x[i]));
        probe[i] = x[i] + h;
        const double up = safe_eval(f, probe, evals);
        probe[i] = x[i] - h;
        const double down = safe_eval(f, probe, evals);
        probe[i] = x[i];
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

}  // namespace

Vector central_gradient(const Objective& f, const Vector& x, double rel_step) {
    int evals = 0;
    return gradient_counted(f, x, rel_step, evals);
}

Matrix central_hessian(const Objective& f, const Vector& x, const Vector& steps) {
    const Eigen::Index n = x.size();
    Matrix h(n, n);
    const double f0 = f(x);
    Vector p = x;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double hi = steps[i];
        p[i] = x[i] + hi;
        const double fp = f(p);
        p[i] = x[i] - hi;
        const double fm = f(p);
        p[i] = x[i];
        h(i, i) = (fp - 2.0 * f0 + fm) / (hi * hi);
        for (Eigen::Index j = 0; j < i; ++j) {
            const double hj = steps[j];
            p[i] = x[i] + hi;
            p[j] = x[j] + hj;
            const double fpp = f(p);
            p[j] = x[j] - hj;
            const double fpm = f(p);
            p[i] = x[i] - hi;
            const double fmm = f(p);
            p[j] = x[j] + hj;
            const double fmp = f(p);
            p[i] = x[i];
            p[j] = x[j];
            h(i, j) = h(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
        }
    }
    return h;
}

BfgsResult minimize_bfgs(const Objective& f, Vector x0, const BfgsOptions& options) {
    int grad_evals = 0;
    const Gradient g = [&](const Vector& x) { return gradient_counted(f, x, options.fd_step, grad_evals); };
    BfgsResult r = minimize_bfgs(f, g, std::move(x0), options);
    r.evaluations += grad_evals;
    return r;
}

BfgsResult minimize_bfgs(const Objective& f, const Gradient& gradient, Vector x0, const BfgsOptions& options) {
    const Eigen::Index n = x0.size();
    BfgsResult r;
    r.x = std::move(x0);
    r.value = safe_eval(f, r.x, r.evaluations);
    if (!std::isfinite(r.value)) fail(ErrorCode::NonConvergence, "objective is not finite at the starting point");
    if (n == 0) {
        r.gradient = Vector(0);
        return r;
    }
    r.gradient = gradient(r.x);
    if (!r.gradient.allFinite()) fail(ErrorCode::NonConvergence, "gradient is not finite at the starting point");

    Matrix hinv = Matrix::Identity(n, n);
    bool fresh = true;  // hinv is the identity
    int stalls = 0;
    for (; r.iterations < options.max_iterations; ++r.iterations) {
        if (r.gradient.lpNorm<Eigen::Infinity>() < options.grad_tol) break;

        Vector dir = -hinv * r.gradient;
        double slope = r.gradient.dot(dir);
        if (!(slope < 0.0)) {
            hinv.setIdentity();
            fresh = true;
            dir = -r.gradient;
            slope = r.gradient.dot(dir);
        }
        double step = 1.0;
        const double dnorm = dir.lpNorm<Eigen::Infinity>();
        if (dnorm * step > options.max_step) step = options.max_step / dnorm;

        Vector x_new;
        double f_new = std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int k = 0; k < 60; ++k) {
            x_new = r.x + step * dir;
            f_new = safe_eval(f, x_new, r.evaluations);
            if (f_new <= r.value + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            // Quadratic interpolation when the trial value is usable, else halve.
            double next = 0.5 * step;
            if (std::isfinite(f_new)) {
                const double denom = 2.0 * (f_new - r.value - slope * step);
                if (denom > 0.0) next = std::clamp(-slope * step * step / denom, 0.1 * step, 0.5 * step);
            }
            step = next;
        }
        if (!accepted) {
            if (fresh) break;  // no descent even along the gradient
            hinv.setIdentity();
            fresh = true;
            continue;
        }

        Vector g_new = gradient(x_new);
        if (!g_new.allFinite()) {
            // Accept the point but stop: the gradient is unusable near a barrier.
            r.x = std::move(x_new);
            r.value = f_new;
            r.gradient = std::move(g_new);
            ++r.iterations;
            break;
        }
        const Vector s = x_new - r.x;
        const Vector y = g_new - r.gradient;
        const double sy = s.dot(y);
        const double improvement = r.value - f_new;
        r.x = std::move(x_new);
        r.value = f_new;
        r.gradient = std::move(g_new);

        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (fresh) {
                hinv *= sy / y.dot(y);
                fresh = false;
            }
            const double rho = 1.0 / sy;
            const Vector hy = hinv * y;
            hinv += rho * rho * (sy + y.dot(hy)) * (s * s.transpose()) - rho * (hy * s.transpose() + s * hy.transpose());
        }

        if (improvement <= options.rel_tol * std::max(1.0, std::abs(r.value))) {
            if (++stalls >= options.max_stalls) {
                ++r.iterations;
                break;
            }
        } else {
            stalls = 0;
        }
    }
    return r;
}

}  // namespace chainspill::econ

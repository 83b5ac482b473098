#pragma once

#include <Eigen/Dense>

#include <functional>

namespace chainspill::econ {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Objective = std::function<double(const Vector&)>;
using Gradient = std::function<Vector(const Vector&)>;

struct BfgsOptions {
    int max_iterations = 2000;
    /// Stop once the relative improvement of the objective stays below this
    /// for `max_stalls` consecutive iterations.
    double rel_tol = 1e-9;
    int max_stalls = 2;
    /// Stop immediately once the gradient max-norm falls below this.
    double grad_tol = 1e-7;
    /// Central-difference step, relative: h_i = fd_step * max(1, |x_i|).
    double fd_step = 1e-5;
    /// Cap on the max-norm of a single step in parameter space.
    double max_step = 5.0;
};

struct BfgsResult {
    Vector x;
    double value = 0.0;
    Vector gradient;
    int iterations = 0;
    int evaluations = 0;

    [[nodiscard]] double gradient_norm() const { return gradient.size() ? gradient.lpNorm<Eigen::Infinity>() : 0.0; }
};

[[nodiscard]] Vector central_gradient(const Objective& f, const Vector& x, double rel_step = 1e-5);

/// Central-difference Hessian with absolute per-coordinate steps.
[[nodiscard]] Matrix central_hessian(const Objective& f, const Vector& x, const Vector& steps);

/// Quasi-Newton (BFGS, inverse-Hessian form) minimisation with
/// central-difference gradients and a backtracking Armijo line search.
/// Non-finite objective values are treated as +infinity.
[[nodiscard]] BfgsResult minimize_bfgs(const Objective& f, Vector x0, const BfgsOptions& options = {});
/// Same with a caller-supplied gradient (e.g. a structured finite difference).
[[nodiscard]] BfgsResult minimize_bfgs(const Objective& f, const Gradient& gradient, Vector x0,
                                       const BfgsOptions& options = {});

}  // namespace chainspill::econ

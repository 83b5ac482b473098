#include "chainspill/econometrics/ols.hpp"

#include "chainspill/error.hpp"

namespace chainspill::econ {

namespace {

Eigen::ColPivHouseholderQR<Matrix> decompose(const Matrix& X) {
    Eigen::ColPivHouseholderQR<Matrix> qr(X);
    qr.setThreshold(1e-10);
    return qr;
}

}  // namespace

Eigen::Index design_rank(const Matrix& X) { return decompose(X).rank(); }

OlsResult ols(const Matrix& X, const Vector& y) {
    const Eigen::Index n = X.rows();
    const Eigen::Index k = X.cols();
    if (y.size() != n) fail(ErrorCode::InvalidArgument, "ols: row count mismatch");
    if (n <= k) fail(ErrorCode::InsufficientData, "ols: need more rows than columns");
    const auto qr = decompose(X);
    if (qr.rank() < k) {
        fail(ErrorCode::SingularDesign,
             "design has rank " + std::to_string(qr.rank()) + " < " + std::to_string(k) + " columns");
    }
    OlsResult r;
    r.beta = qr.solve(y);
    r.residuals = y - X * r.beta;
    r.ssr = r.residuals.squaredNorm();
    r.sigma2 = r.ssr / static_cast<double>(n - k);
    const Matrix xtx_inv = (X.transpose() * X).inverse();
    r.std_errors = (r.sigma2 * xtx_inv.diagonal()).cwiseSqrt();
    return r;
}

}  // namespace chainspill::econ

#pragma once

#include "chainspill/econometrics/optimizer.hpp"

namespace chainspill::econ {

struct OlsResult {
    Vector beta;
    Vector residuals;
    Vector std_errors;  // homoskedastic
    double ssr = 0.0;
    double sigma2 = 0.0;  // ssr / (n - k)
};

/// Least squares via column-pivoted QR. Throws SingularDesign when X is rank
/// deficient and InsufficientData when n <= k.
[[nodiscard]] OlsResult ols(const Matrix& X, const Vector& y);

/// Rank of X under the QR threshold used by ols().
[[nodiscard]] Eigen::Index design_rank(const Matrix& X);

}  // namespace chainspill::econ

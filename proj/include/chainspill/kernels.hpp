#pragma once

// Data-parallel kernels. Each OpenMP kernel has a serial reference that tests
// compare it against bit-for-bit and that the benchmark target times.

#include "chainspill/series.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace chainspill::kernels {

/// Worker count used when a caller passes jobs <= 0.
[[nodiscard]] int default_jobs() noexcept;
void set_default_jobs(int jobs) noexcept;

/// Runs fn(0..n-1) on an OpenMP pool with dynamic scheduling. Exceptions are
/// captured per index and the one from the lowest index is rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);
void serial_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Dense T x A layout of one portfolio: row t, column a (assets sorted by id).
struct PortfolioMatrices {
    std::size_t periods = 0;
    std::size_t assets = 0;
    std::vector<double> returns;         // NaN when missing
    std::vector<double> caps_prev;       // cap at t-1, NaN when missing
    std::vector<std::uint8_t> member;    // 1 if the asset belongs to the portfolio at t

    [[nodiscard]] std::size_t at(std::size_t t, std::size_t a) const noexcept { return t * assets + a; }
};

struct WeightedReturns {
    std::vector<double> value;
    std::vector<PointStatus> status;
};

/// Reference: per-period maps fed through portfolio_return().
[[nodiscard]] WeightedReturns weighted_returns_serial(const PortfolioMatrices& m,
                                                      const std::vector<std::string>& asset_ids);
/// OpenMP over periods; identical summation order to the reference.
[[nodiscard]] WeightedReturns weighted_returns_omp(const PortfolioMatrices& m, int jobs = 0);

}  // namespace chainspill::kernels

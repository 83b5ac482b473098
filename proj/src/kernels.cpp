#include "chainspill/kernels.hpp"

#include "chainspill/error.hpp"
#include "chainspill/portfolio.hpp"

#include <omp.h>

#include <atomic>
#include <exception>
#include <map>

namespace chainspill::kernels {

namespace {
std::atomic<int> g_jobs{0};
}

int default_jobs() noexcept {
    const int j = g_jobs.load();
    return j > 0 ? j : omp_get_max_threads();
}

void set_default_jobs(int jobs) noexcept { g_jobs.store(jobs); }

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 0) jobs = default_jobs();
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

void serial_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

WeightedReturns weighted_returns_serial(const PortfolioMatrices& m, const std::vector<std::string>& asset_ids) {
    WeightedReturns out{std::vector<double>(m.periods, kMissing),
                        std::vector<PointStatus>(m.periods, PointStatus::Missing)};
    for (std::size_t t = 0; t < m.periods; ++t) {
        std::map<std::string, double> rets;
        std::map<std::string, double> caps;
        bool any_member = false;
        for (std::size_t a = 0; a < m.assets; ++a) {
            if (!m.member[m.at(t, a)]) continue;
            any_member = true;
            if (!is_missing(m.returns[m.at(t, a)])) rets[asset_ids[a]] = m.returns[m.at(t, a)];
            if (!is_missing(m.caps_prev[m.at(t, a)])) caps[asset_ids[a]] = m.caps_prev[m.at(t, a)];
        }
        if (!any_member) {
            out.status[t] = PointStatus::EmptyPortfolio;
            continue;
        }
        bool eligible = false;
        for (const auto& [id, r] : rets) eligible = eligible || caps.contains(id);
        if (!eligible) continue;
        try {
            out.value[t] = portfolio_return(rets, caps);
            out.status[t] = PointStatus::Present;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptyPortfolio) throw;
            out.status[t] = PointStatus::EmptyPortfolio;
        }
    }
    return out;
}

WeightedReturns weighted_returns_omp(const PortfolioMatrices& m, int jobs) {
    if (jobs <= 0) jobs = default_jobs();
    WeightedReturns out{std::vector<double>(m.periods, kMissing),
                        std::vector<PointStatus>(m.periods, PointStatus::Missing)};
    const auto periods = static_cast<std::int64_t>(m.periods);
#pragma omp parallel for schedule(static) num_threads(jobs)
    for (std::int64_t ti = 0; ti < periods; ++ti) {
        const auto t = static_cast<std::size_t>(ti);
        bool any_member = false;
        bool eligible = false;
        double total = 0.0;
        for (std::size_t a = 0; a < m.assets; ++a) {
            const std::size_t k = m.at(t, a);
            if (!m.member[k]) continue;
            any_member = true;
            if (is_missing(m.returns[k]) || is_missing(m.caps_prev[k])) continue;
            eligible = true;
            total += m.caps_prev[k];
        }
        if (!any_member) {
            out.status[t] = PointStatus::EmptyPortfolio;
            continue;
        }
        if (!eligible) continue;
        if (!(total > 0.0)) {
            out.status[t] = PointStatus::EmptyPortfolio;
            continue;
        }
        double acc = 0.0;
        for (std::size_t a = 0; a < m.assets; ++a) {
            const std::size_t k = m.at(t, a);
            if (!m.member[k] || is_missing(m.returns[k]) || is_missing(m.caps_prev[k])) continue;
            acc += (m.caps_prev[k] / total) * m.returns[k];
        }
        out.value[t] = acc;
        out.status[t] = PointStatus::Present;
    }
    return out;
}

}  // namespace chainspill::kernels

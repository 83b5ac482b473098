#pragma once

#include "chainspill/timebase.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace chainspill {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

[[nodiscard]] inline bool is_missing(double v) noexcept { return std::isnan(v); }

/// Why a point inside coverage carries no value.
enum class PointStatus : std::uint8_t {
    Present = 0,
    Missing = 1,         // an input was absent
    EmptyPortfolio = 2,  // no eligible asset for the portfolio at this half-day
};

/// Half-day indexed series over a contiguous coverage range. Used for prices,
/// levels and returns alike. Missing points are explicit (NaN value plus a
/// status), never silently zero. Lookups outside coverage report missing.
class Series {
public:
    Series() = default;
    Series(std::string id, HalfDayRange coverage);

    [[nodiscard]] const std::string& id() const noexcept { return id_; }
    void set_id(std::string id) { id_ = std::move(id); }
    [[nodiscard]] const HalfDayRange& coverage() const noexcept { return coverage_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

    [[nodiscard]] double at(HalfDayId t) const noexcept;
    [[nodiscard]] PointStatus status_at(HalfDayId t) const noexcept;
    [[nodiscard]] bool has(HalfDayId t) const noexcept { return !is_missing(at(t)); }

    [[nodiscard]] double value(std::size_t i) const noexcept { return values_[i]; }
    [[nodiscard]] PointStatus status(std::size_t i) const noexcept { return status_[i]; }

    /// Writes inside coverage only; throws InvalidArgument otherwise.
    void set(HalfDayId t, double v);
    void mark(HalfDayId t, PointStatus status);
    void set_index(std::size_t i, double v) noexcept;
    void mark_index(std::size_t i, PointStatus status) noexcept;

    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    /// Present values in time order.
    [[nodiscard]] std::vector<double> present_values() const;
    [[nodiscard]] std::size_t present_count() const noexcept;

    /// Same series restricted/extended to `range`; new points are missing.
    [[nodiscard]] Series reindex(const HalfDayRange& range) const;

private:
    std::string id_;
    HalfDayRange coverage_;
    std::vector<double> values_;
    std::vector<PointStatus> status_;
};

using ReturnSeries = Series;

}  // namespace chainspill

#include "chainspill/series.hpp"

#include "chainspill/error.hpp"

namespace chainspill {

Series::Series(std::string id, HalfDayRange coverage)
    : id_(std::move(id)),
      coverage_(coverage),
      values_(coverage.size(), kMissing),
      status_(coverage.size(), PointStatus::Missing) {}

double Series::at(HalfDayId t) const noexcept {
    const auto i = coverage_.index_of(t);
    return i ? values_[*i] : kMissing;
}

PointStatus Series::status_at(HalfDayId t) const noexcept {
    const auto i = coverage_.index_of(t);
    return i ? status_[*i] : PointStatus::Missing;
}

void Series::set(HalfDayId t, double v) {
    const auto i = coverage_.index_of(t);
    if (!i) fail(ErrorCode::InvalidArgument, "series '" + id_ + "': " + t.to_string() + " outside coverage");
    set_index(*i, v);
}

void Series::mark(HalfDayId t, PointStatus status) {
    const auto i = coverage_.index_of(t);
    if (!i) fail(ErrorCode::InvalidArgument, "series '" + id_ + "': " + t.to_string() + " outside coverage");
    mark_index(*i, status);
}

void Series::set_index(std::size_t i, double v) noexcept {
    values_[i] = v;
    status_[i] = is_missing(v) ? PointStatus::Missing : PointStatus::Present;
}

void Series::mark_index(std::size_t i, PointStatus status) noexcept {
    status_[i] = status;
    if (status != PointStatus::Present) values_[i] = kMissing;
}

std::vector<double> Series::present_values() const {
    std::vector<double> out;
    out.reserve(values_.size());
    for (double v : values_) {
        if (!is_missing(v)) out.push_back(v);
    }
    return out;
}

std::size_t Series::present_count() const noexcept {
    std::size_t n = 0;
    for (double v : values_) n += is_missing(v) ? 0 : 1;
    return n;
}

Series Series::reindex(const HalfDayRange& range) const {
    Series out(id_, range);
    for (std::size_t i = 0; i < range.size(); ++i) {
        const auto src = coverage_.index_of(range[i]);
        if (!src) continue;
        out.values_[i] = values_[*src];
        out.status_[i] = status_[*src];
    }
    return out;
}

}  // namespace chainspill

#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>

namespace chainspill {

using Date = std::chrono::sys_days;
using Instant = std::chrono::sys_time<std::chrono::milliseconds>;

/// H1 covers [00:00, 12:00) UTC, H2 covers [12:00, 24:00) UTC.
enum class Half : std::uint8_t { H1 = 0, H2 = 1 };

/// One bar of the half-day UTC grid. Ordered consistently with interval starts.
struct HalfDayId {
    Date date{};
    Half half = Half::H1;

    friend auto operator<=>(const HalfDayId&, const HalfDayId&) = default;
    friend bool operator==(const HalfDayId&, const HalfDayId&) = default;

    /// Dense integer index: 2 * days_since_epoch + half. Differences count half-days.
    [[nodiscard]] std::int64_t ordinal() const noexcept {
        return 2 * static_cast<std::int64_t>(date.time_since_epoch().count()) +
               static_cast<std::int64_t>(half);
    }
    [[nodiscard]] static HalfDayId from_ordinal(std::int64_t ordinal) noexcept;

    [[nodiscard]] HalfDayId next() const noexcept { return from_ordinal(ordinal() + 1); }
    [[nodiscard]] HalfDayId prev() const noexcept { return from_ordinal(ordinal() - 1); }
    [[nodiscard]] HalfDayId advance(std::int64_t n) const noexcept { return from_ordinal(ordinal() + n); }

    /// Instant at which this half-day opens.
    [[nodiscard]] Instant start() const noexcept;
    [[nodiscard]] std::string to_string() const;  // "2023-03-17/H1"
};

[[nodiscard]] inline HalfDayId successor(HalfDayId id) noexcept { return id.next(); }

/// Half-open interval membership: 12:00:00.000 belongs to H2, 00:00:00.000 to H1.
[[nodiscard]] HalfDayId half_day_index(Instant ts) noexcept;

/// Contiguous run of half-days [first, first + count).
class HalfDayRange {
public:
    HalfDayRange() = default;
    HalfDayRange(HalfDayId first, std::size_t count) : first_(first), count_(count) {}
    /// Inclusive on both ends; an inverted pair yields an empty range.
    [[nodiscard]] static HalfDayRange between(HalfDayId first, HalfDayId last);
    /// (start, H1) through (end, H2).
    [[nodiscard]] static HalfDayRange days(Date start, Date end);

    [[nodiscard]] HalfDayId first() const noexcept { return first_; }
    [[nodiscard]] HalfDayId last() const noexcept { return first_.advance(static_cast<std::int64_t>(count_) - 1); }
    [[nodiscard]] std::size_t size() const noexcept { return count_; }
    [[nodiscard]] bool empty() const noexcept { return count_ == 0; }
    [[nodiscard]] HalfDayId operator[](std::size_t i) const noexcept {
        return first_.advance(static_cast<std::int64_t>(i));
    }
    [[nodiscard]] std::optional<std::size_t> index_of(HalfDayId id) const noexcept;
    [[nodiscard]] bool contains(HalfDayId id) const noexcept { return index_of(id).has_value(); }

    class iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = HalfDayId;
        using difference_type = std::ptrdiff_t;
        using pointer = void;
        using reference = HalfDayId;

        iterator() = default;
        explicit iterator(std::int64_t ordinal) : ordinal_(ordinal) {}
        HalfDayId operator*() const noexcept { return HalfDayId::from_ordinal(ordinal_); }
        iterator& operator++() noexcept { ++ordinal_; return *this; }
        iterator operator++(int) noexcept { auto t = *this; ++ordinal_; return t; }
        friend bool operator==(const iterator&, const iterator&) = default;

    private:
        std::int64_t ordinal_ = 0;
    };

    [[nodiscard]] iterator begin() const noexcept { return iterator(first_.ordinal()); }
    [[nodiscard]] iterator end() const noexcept {
        return iterator(first_.ordinal() + static_cast<std::int64_t>(count_));
    }

    friend bool operator==(const HalfDayRange&, const HalfDayRange&) = default;

private:
    HalfDayId first_{};
    std::size_t count_ = 0;
};

enum class EquityMarket : std::uint8_t { SP500, HangSeng, FTSE100 };
enum class Session : std::uint8_t { Overnight, Intraday };

/// Which daily component of `market` is incorporated into the crypto grid during `half`.
[[nodiscard]] Session session_alignment(EquityMarket market, Half half) noexcept;

[[nodiscard]] std::string_view to_string(EquityMarket market) noexcept;
[[nodiscard]] std::string_view to_string(Session session) noexcept;
[[nodiscard]] std::string_view to_string(Half half) noexcept;
[[nodiscard]] std::optional<EquityMarket> parse_equity_market(std::string_view text) noexcept;

// Text forms. Parsers throw Error{InvalidArgument} on bad input.
[[nodiscard]] Date parse_date(std::string_view text);            // YYYY-MM-DD
[[nodiscard]] std::string format_date(Date date);
[[nodiscard]] Half parse_half(std::string_view text);             // "H1" | "H2"
[[nodiscard]] Instant parse_rfc3339(std::string_view text);       // UTC "Z" or +hh:mm offset
[[nodiscard]] std::string format_rfc3339(Instant ts);             // always "...Z"
[[nodiscard]] bool is_weekend(Date date) noexcept;

}  // namespace chainspill

#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace covtrend {

/// Calendar day stored as an offset from 1970-01-01.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

    static Date from_ymd(int year, unsigned month, unsigned day);
    /// Parses `YYYY-MM-DD`. Throws FormatError.
    static Date parse_iso(std::string_view text);
    /// Parses the JHU column style `M/D/YY` (years 2000-2099). Throws FormatError.
    static Date parse_us_short(std::string_view text);

    std::string iso() const;
    constexpr std::int32_t days() const { return days_; }

    constexpr Date operator+(std::int32_t n) const { return Date(days_ + n); }
    constexpr Date operator-(std::int32_t n) const { return Date(days_ - n); }
    constexpr std::int32_t operator-(Date other) const { return days_ - other.days_; }
    constexpr auto operator<=>(const Date&) const = default;

private:
    std::int32_t days_ = 0;
};

} // namespace covtrend

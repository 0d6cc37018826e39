#include "covtrend/date.hpp"

#include "covtrend/error.hpp"

#include <charconv>
#include <cstdio>

namespace covtrend {

namespace {

int parse_int(std::string_view text, std::string_view whole) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw FormatError("bad date '" + std::string(whole) + "'");
    }
    return value;
}

} // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
    const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                          std::chrono::day{day}};
    if (!ymd.ok()) {
        throw FormatError("invalid calendar date " + std::to_string(year) + "-" +
                          std::to_string(month) + "-" + std::to_string(day));
    }
    return Date(std::chrono::sys_days{ymd}.time_since_epoch().count());
}

Date Date::parse_iso(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw FormatError("bad ISO date '" + std::string(text) + "'");
    }
    const int y = parse_int(text.substr(0, 4), text);
    const int m = parse_int(text.substr(5, 2), text);
    const int d = parse_int(text.substr(8, 2), text);
    if (m < 1 || m > 12 || d < 1 || d > 31) {
        throw FormatError("date out of range '" + std::string(text) + "'");
    }
    return from_ymd(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

Date Date::parse_us_short(std::string_view text) {
    const auto first = text.find('/');
    const auto second = first == std::string_view::npos ? first : text.find('/', first + 1);
    if (second == std::string_view::npos) {
        throw FormatError("bad M/D/YY date '" + std::string(text) + "'");
    }
    const int m = parse_int(text.substr(0, first), text);
    const int d = parse_int(text.substr(first + 1, second - first - 1), text);
    const int yy = parse_int(text.substr(second + 1), text);
    if (m < 1 || m > 12 || d < 1 || d > 31 || yy < 0 || yy > 99) {
        throw FormatError("date out of range '" + std::string(text) + "'");
    }
    return from_ymd(2000 + yy, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string Date::iso() const {
    const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days_}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

} // namespace covtrend

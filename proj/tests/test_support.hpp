#pragma once

#include "covtrend/series.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace test_support {

inline covtrend::DailySeries series_of(const std::vector<double>& values, const std::string& region = "A",
                                       covtrend::Date start = covtrend::Date::from_ymd(2020, 3, 1)) {
    covtrend::DailySeries s;
    s.region = covtrend::RegionKey::from_label(region);
    s.start_date = start;
    for (double v : values) {
        s.values.emplace_back(v);
    }
    return s;
}

inline std::vector<double> repeat(double value, int n) {
    return std::vector<double>(static_cast<std::size_t>(n), value);
}

inline std::vector<double> concat(std::vector<double> a, const std::vector<double>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

inline double sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s;
}

} // namespace test_support

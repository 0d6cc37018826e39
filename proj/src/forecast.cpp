#include "covtrend/forecast.hpp"

#include "covtrend/error.hpp"
#include "covtrend/piecewise_trend.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace covtrend {

std::string_view to_string(ScaleMode mode) {
    return mode == ScaleMode::linear ? "linear" : "log";
}

namespace forecast {

PointForecast extrapolate(std::span<const double> trend, int anchor, int horizon, int slope_window) {
    if (slope_window < 1) {
        throw ContractError("slope window must be at least one day");
    }
    if (horizon < 1) {
        throw ContractError("forecast horizon must be at least one day");
    }
    if (anchor < slope_window || anchor >= static_cast<int>(trend.size())) {
        throw ContractError("trend needs " + std::to_string(slope_window + 1) +
                            " values up to the forecast anchor");
    }
    const double last = trend[static_cast<std::size_t>(anchor)];
    const double earlier = trend[static_cast<std::size_t>(anchor - slope_window)];
    if (!std::isfinite(last) || !std::isfinite(earlier)) {
        throw ContractError("trend contains non-finite values");
    }

    PointForecast out;
    out.origin = anchor;
    out.horizon = horizon;
    out.values.resize(static_cast<std::size_t>(horizon));
    out.slope = (last - earlier) / slope_window;

    if (out.slope >= 0.0) {
        out.scale_mode = ScaleMode::linear;
        for (int h = 1; h <= horizon; ++h) {
            out.values[static_cast<std::size_t>(h - 1)] = std::max(0.0, last + out.slope * h);
        }
        return out;
    }

    out.scale_mode = ScaleMode::log;
    if (last <= 0.0) {
        return out;   // all zero
    }
    // earlier > last > 0 here, so the ratio lies in (0, 1).
    const double ratio = std::pow(last / earlier, 1.0 / slope_window);
    double value = last;
    for (int h = 1; h <= horizon; ++h) {
        value *= ratio;
        out.values[static_cast<std::size_t>(h - 1)] = value;
    }
    return out;
}

PointForecast extrapolate(const TrendEstimate& trend, int anchor, int horizon, int slope_window) {
    return extrapolate(trend.values, anchor, horizon, slope_window);
}

WeeklyTarget weekly_total(std::span<const double> daily, int t, int k) {
    if (k != 1 && k != 2) {
        throw ContractError("weekly targets support k = 1 or 2 only");
    }
    const int first = t + 1 + 7 * (k - 1);
    const int last = t + 7 * k;
    if (first < 0 || last >= static_cast<int>(daily.size())) {
        throw ContractError("insufficient horizon for week " + std::to_string(k));
    }
    double total = 0.0;
    for (int i = first; i <= last; ++i) {
        total += daily[static_cast<std::size_t>(i)];
    }
    return {k, total};
}

WeeklyTarget weekly_total(const PointForecast& forecast, int k) {
    if (k != 1 && k != 2) {
        throw ContractError("weekly targets support k = 1 or 2 only");
    }
    if (static_cast<int>(forecast.values.size()) < 7 * k) {
        throw ContractError("forecast horizon shorter than week " + std::to_string(k));
    }
    double total = 0.0;
    for (int h = 1 + 7 * (k - 1); h <= 7 * k; ++h) {
        total += forecast.values[static_cast<std::size_t>(h - 1)];
    }
    return {k, total};
}

double previous_week_total(std::span<const double> values, int t) {
    if (t < 6 || t >= static_cast<int>(values.size())) {
        throw InsufficientHistory("need 7 days ending at the origin");
    }
    double total = 0.0;
    for (int i = t - 6; i <= t; ++i) {
        total += values[static_cast<std::size_t>(i)];
    }
    return total;
}

PointForecast baseline_forecast(std::span<const double> values, int t, int horizon) {
    if (t < 9 || t >= static_cast<int>(values.size())) {
        throw InsufficientHistory("baseline needs 10 days of history up to the origin");
    }
    if (horizon < 1) {
        throw ContractError("forecast horizon must be at least one day");
    }
    PointForecast out;
    out.origin = t;
    out.horizon = horizon;
    out.values.assign(static_cast<std::size_t>(horizon), previous_week_total(values, t) / 7.0);
    return out;
}

std::optional<double> centred_mean(std::span<const double> values, int t) {
    if (t - 3 < 0 || t + 3 >= static_cast<int>(values.size())) {
        return std::nullopt;
    }
    double total = 0.0;
    for (int i = t - 3; i <= t + 3; ++i) {
        total += values[static_cast<std::size_t>(i)];
    }
    return total / 7.0;
}

} // namespace forecast
} // namespace covtrend

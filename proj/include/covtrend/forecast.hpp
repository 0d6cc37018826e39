#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace covtrend {

struct TrendEstimate;

enum class ScaleMode { linear, log };

std::string_view to_string(ScaleMode mode);

/// Daily trend extrapolation f_{t,h}, h = 1..horizon (values[h-1]).
struct PointForecast {
    int origin = 0;
    int horizon = 0;
    std::vector<double> values;
    ScaleMode scale_mode = ScaleMode::linear;
    /// Slope per day measured over the slope window.
    double slope = 0.0;
};

struct WeeklyTarget {
    int week = 1;
    double total = 0.0;
};

namespace forecast {

struct Settings {
    int slope_window = 7;
    int horizon_days = 14;
};

/// Rising or flat trends continue linearly with the slope over the last `slope_window` days;
/// falling trends continue geometrically with the matching per-day ratio. Floored at 0.
/// Throws ContractError when fewer than slope_window + 1 values end at `anchor`.
PointForecast extrapolate(std::span<const double> trend, int anchor, int horizon, int slope_window = 7);
PointForecast extrapolate(const TrendEstimate& trend, int anchor, int horizon, int slope_window = 7);

/// Sum of daily[t + h + 7(k-1)] for h = 1..7. k must be 1 or 2.
WeeklyTarget weekly_total(std::span<const double> daily, int t, int k);
/// F_{t,k} from a point forecast with horizon >= 7k.
WeeklyTarget weekly_total(const PointForecast& forecast, int k);

/// Sum of the 7 days ending at t (inclusive).
double previous_week_total(std::span<const double> values, int t);

/// Constant forecast equal to the mean of the 7 days ending at t.
/// Needs at least 10 days of history up to t.
PointForecast baseline_forecast(std::span<const double> values, int t, int horizon);

/// Centred rolling mean (1/7) sum_{k=-3..3} x_{t+k}; empty when the window leaves the series.
std::optional<double> centred_mean(std::span<const double> values, int t);

} // namespace forecast
} // namespace covtrend

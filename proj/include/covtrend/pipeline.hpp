#pragma once

#include "covtrend/config.hpp"
#include "covtrend/forecast.hpp"
#include "covtrend/piecewise_trend.hpp"
#include "covtrend/probabilistic.hpp"
#include "covtrend/series.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace covtrend::pipeline {

enum class VintageMode { as_of, final };

/// Method forecast made at day `origin`. When the trailing days before the origin were not
/// trusted, the extrapolation starts at `anchor` but daily[h-1] is always the value for origin + h.
struct OriginForecast {
    int origin = 0;
    int anchor = 0;
    std::vector<double> daily;
    ScaleMode scale_mode = ScaleMode::linear;

    double weekly(int k) const;
};

/// Trend + extrapolation on a cleaned series whose last day is the origin.
/// Throws InsufficientHistory when fewer than slope_window + 1 trusted days exist.
OriginForecast method_forecast(const CleanSeries& clean, const Config& config);

/// Runs the forecasting pipeline over every origin of one region, caching the cleaned data and
/// the method forecast of each origin. Not thread-safe; use one instance per region.
class RegionRunner {
public:
    RegionRunner(DailySeries raw, Config config, VintageMode mode = VintageMode::as_of);

    const DailySeries& raw() const { return raw_; }
    const Config& config() const { return config_; }
    int last_index() const { return static_cast<int>(raw_.size()) - 1; }

    /// Cleaned data as it was known at day t (as_of), or the cleaned full series (final).
    const CleanSeries& clean_at(int t);
    /// Method forecast at origin s; empty when s has too little history.
    const std::optional<OriginForecast>& method_at(int s);

    /// 23-quantile forecast at origin t calibrated on past errors known at t.
    QuantileForecast method_quantiles(int t, Target target);
    QuantileForecast baseline_quantiles(int t, Target target);

private:
    std::vector<double> truths(int t, Target target, int first, int last);

    DailySeries raw_;
    Config config_;
    VintageMode mode_;
    std::map<int, CleanSeries> clean_;
    std::map<int, std::optional<OriginForecast>> method_;
};

struct RegionForecast {
    RegionKey region;
    SeriesKind kind = SeriesKind::cases;
    int origin = 0;
    Date origin_date;
    CleanSeries clean;
    TrendEstimate trend;
    OriginForecast point;
    std::vector<QuantileForecast> weekly;   // k = 1, 2
    std::vector<QuantileForecast> daily;    // h = 1..7; empty when history is too short
};

/// Forecast at the last day of `raw`. Throws InsufficientHistory when the weekly quantiles
/// cannot be calibrated.
RegionForecast run_region_forecast(const DailySeries& raw, const Config& config);

/// Calls fn(i) for i in [0, n) on up to `threads` workers. Results must be written by index.
/// The first exception thrown by fn is rethrown after all workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// Shell-style match with '*' and '?'.
bool glob_match(std::string_view pattern, std::string_view text);

} // namespace covtrend::pipeline

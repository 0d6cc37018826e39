#pragma once

#include "covtrend/pipeline.hpp"

#include <string>

namespace covtrend::plot {

struct PlotOptions {
    int history_days = 90;
    int width = 800;
    int height = 400;
};

/// Static SVG: observed daily counts as bars, trend line, 7-day forecast line and the nested
/// central intervals of the daily quantile forecasts as stacked translucent bands.
std::string render_forecast_svg(const pipeline::RegionForecast& forecast, const PlotOptions& options = {});

} // namespace covtrend::plot

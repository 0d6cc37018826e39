#include "covtrend/svg_plot.hpp"

#include "covtrend/probabilistic.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace covtrend::plot {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string render_forecast_svg(const pipeline::RegionForecast& f, const PlotOptions& options) {
    const int origin = f.origin;
    const int first = std::max(0, origin - options.history_days + 1);
    const int horizon = 7;
    const int days = origin - first + 1 + horizon;

    double top = 1.0;
    for (int i = first; i <= origin; ++i) {
        top = std::max(top, f.clean.values[static_cast<std::size_t>(i)]);
    }
    for (double v : f.trend.values) {
        top = std::max(top, v);
    }
    for (int h = 0; h < horizon && h < static_cast<int>(f.point.daily.size()); ++h) {
        top = std::max(top, f.point.daily[static_cast<std::size_t>(h)]);
    }
    for (const auto& q : f.daily) {
        top = std::max(top, q.quantiles.back());
    }
    top *= 1.05;

    const double margin = 40.0;
    const double plot_w = options.width - 2 * margin;
    const double plot_h = options.height - 2 * margin;
    const double step = plot_w / days;
    auto x_of = [&](int day) { return margin + (day - first + 0.5) * step; };
    auto y_of = [&](double v) { return margin + plot_h * (1.0 - v / top); };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) +
                      "\" height=\"" + std::to_string(options.height) + "\">\n";
    svg += "<title>" + xml_escape(f.region.label()) + " " + f.origin_date.iso() + "</title>\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<line x1=\"" + num(margin) + "\" y1=\"" + num(margin + plot_h) + "\" x2=\"" + num(margin + plot_w) +
           "\" y2=\"" + num(margin + plot_h) + "\" stroke=\"black\"/>\n";

    svg += "<g fill=\"#9e9e9e\">\n";
    for (int i = first; i <= origin; ++i) {
        const double v = std::max(0.0, f.clean.values[static_cast<std::size_t>(i)]);
        svg += "<rect x=\"" + num(x_of(i) - 0.4 * step) + "\" y=\"" + num(y_of(v)) + "\" width=\"" +
               num(0.8 * step) + "\" height=\"" + num(y_of(0.0) - y_of(v)) + "\"/>\n";
    }
    svg += "</g>\n";

    // Widest interval first so the narrower ones stack on top.
    if (!f.daily.empty()) {
        for (std::size_t lo = 0; lo < kMedianIndex; ++lo) {
            const std::size_t hi = kQuantileLevels.size() - 1 - lo;
            std::string points;
            for (int h = 1; h <= static_cast<int>(f.daily.size()); ++h) {
                points += num(x_of(origin + h)) + "," + num(y_of(f.daily[static_cast<std::size_t>(h - 1)].quantiles[hi])) + " ";
            }
            for (int h = static_cast<int>(f.daily.size()); h >= 1; --h) {
                points += num(x_of(origin + h)) + "," + num(y_of(f.daily[static_cast<std::size_t>(h - 1)].quantiles[lo])) + " ";
            }
            points.pop_back();
            svg += "<polygon fill=\"#1e88e5\" fill-opacity=\"0.12\" points=\"" + points + "\"/>\n";
        }
    }

    std::string trend_points;
    const int trend_first = std::max(first, 0);
    for (int i = trend_first; i < static_cast<int>(f.trend.values.size()); ++i) {
        trend_points += num(x_of(i)) + "," + num(y_of(f.trend.values[static_cast<std::size_t>(i)])) + " ";
    }
    if (!trend_points.empty()) {
        trend_points.pop_back();
        svg += "<polyline fill=\"none\" stroke=\"#d32f2f\" stroke-width=\"2\" points=\"" + trend_points + "\"/>\n";
    }

    std::string fc_points;
    for (int h = 1; h <= horizon && h <= static_cast<int>(f.point.daily.size()); ++h) {
        fc_points += num(x_of(origin + h)) + "," + num(y_of(f.point.daily[static_cast<std::size_t>(h - 1)])) + " ";
    }
    if (!fc_points.empty()) {
        fc_points.pop_back();
        svg += "<polyline fill=\"none\" stroke=\"#1565c0\" stroke-width=\"2\" points=\"" + fc_points + "\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace covtrend::plot

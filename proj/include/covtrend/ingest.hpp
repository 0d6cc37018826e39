#pragma once

#include "covtrend/date.hpp"
#include "covtrend/probabilistic.hpp"
#include "covtrend/series.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace covtrend::ingest {

/// JHU wide layout: `Province/State,Country/Region,Lat,Long,<M/D/YY>...` with cumulative
/// counts. Returns daily first differences (the first day keeps its cumulative value);
/// negative differences are kept.
/// Throws FormatError for a bad header or date column and ParseError for a bad cell.
std::vector<DailySeries> parse_jhu_wide(std::string_view csv_text, SeriesKind kind);

/// Long layout `region,date,value` (ISO dates, blank value = no report). Series are returned
/// sorted by region label; missing days inside a region's range are absent.
/// Throws ConflictError for duplicate (region, date) rows and ParseError for bad rows.
std::vector<DailySeries> parse_long(std::string_view csv_text, SeriesKind kind = SeriesKind::cases);

/// Writes the long layout; absent values become blank cells.
std::string write_long(std::span<const DailySeries> series);

/// True when the first line looks like the JHU wide header.
bool looks_like_jhu(std::string_view csv_text);

/// One region's forecast for one target, ready for the hub exchange file.
struct HubForecast {
    std::string location;
    SeriesKind kind = SeriesKind::cases;
    QuantileForecast forecast;
};

/// `<k> wk ahead inc case|death` for weekly targets, `<h> day ahead inc case|death` for daily.
std::string hub_target_name(const Target& target, SeriesKind kind);

/// Hub quantile CSV: one point row plus 23 quantile rows per forecast, sorted by
/// (location, target, quantile) with the point row first. Throws IntegrityError when a
/// forecast violates the quantile invariants.
std::string write_hub_quantiles(std::span<const HubForecast> forecasts, Date origin_date);

struct HubEntry {
    Date forecast_date;
    Date target_end_date;
    HubForecast forecast;
};

/// Reads a hub quantile CSV back into complete forecasts (point row plus all 23 levels).
/// Throws FormatError for a bad header, ParseError for bad rows, IntegrityError for incomplete sets.
std::vector<HubEntry> parse_hub_quantiles(std::string_view csv_text);

} // namespace covtrend::ingest

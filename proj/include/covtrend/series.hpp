#pragma once

#include "covtrend/date.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace covtrend {

/// Identifies one reporting unit, plus the denominators used for incidence.
struct RegionKey {
    std::string country;
    std::optional<std::string> subregion;
    std::optional<std::int64_t> population;       // persons
    std::optional<double> tests_per_million;      // tests per 1M persons

    /// `country` or `country/subregion`; used as the region column in CSV files.
    std::string label() const;
    /// Inverse of label(): splits on the first '/'.
    static RegionKey from_label(std::string_view label);

    /// Throws ContractError when the invariants (non-empty country, positive population) fail.
    void validate() const;

    friend bool operator==(const RegionKey& a, const RegionKey& b) {
        return a.country == b.country && a.subregion == b.subregion;
    }
};

enum class SeriesKind { cases, deaths };

std::string_view to_string(SeriesKind kind);
SeriesKind parse_series_kind(std::string_view text);

/// Consecutive daily counts for one region. An empty optional is a day without a report.
struct DailySeries {
    RegionKey region;
    Date start_date;
    std::vector<std::optional<double>> values;
    SeriesKind kind = SeriesKind::cases;

    std::size_t size() const { return values.size(); }
    Date date_at(std::size_t i) const { return start_date + static_cast<std::int32_t>(i); }
    Date end_date() const { return date_at(values.empty() ? 0 : values.size() - 1); }

    /// Absent days as zero.
    std::vector<double> dense() const;
    /// Copy restricted to days up to and including `last` (as-of view).
    DailySeries truncated(Date last) const;
};

enum class Provenance : std::uint8_t { observed, imputed, rescaled, replaced };

std::string_view to_string(Provenance p);

/// Output of preprocessing: dense, non-negative counts with a trusted range [0, forecast_anchor].
struct CleanSeries {
    RegionKey region;
    Date start_date;
    std::vector<double> values;
    std::size_t forecast_anchor = 0;
    std::vector<Provenance> provenance;
    /// 1 where the source had no report at all (as opposed to a reported zero).
    std::vector<std::uint8_t> absent;
    SeriesKind kind = SeriesKind::cases;

    /// Negative value fell inside the first days, where no weekly growth factor exists.
    bool degenerate_negative = false;
    /// A weekly sum used as growth-factor denominator was zero.
    bool degenerate_growth = false;

    std::size_t size() const { return values.size(); }
    Date date_at(std::size_t i) const { return start_date + static_cast<std::int32_t>(i); }
    /// values[0..forecast_anchor]
    std::vector<double> trusted() const;
    /// Back to a DailySeries; days still marked absent become empty optionals.
    DailySeries to_daily() const;
};

} // namespace covtrend

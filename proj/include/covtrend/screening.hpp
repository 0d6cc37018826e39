#pragma once

#include "covtrend/series.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace covtrend::screening {

enum class ExclusionReason { low_reporting, long_gap, many_outliers };

std::string_view to_string(ExclusionReason reason);

struct Settings {
    /// Sliding MAD window width. 22 means 11 days before and 10 after; 23 is symmetric.
    int mad_window = 22;
    double mad_scale = 1.4826;
    double mad_threshold_sd = 2.0;
    /// Regions reporting on fewer than this fraction of days are excluded (compared exactly).
    int min_reporting_percent = 70;
    int max_missing_run = 5;
    std::size_t n_exclude_outliers = 20;
};

struct ScreeningReport {
    RegionKey region;
    double reporting_fraction = 0.0;
    int max_missing_run = 0;
    std::size_t outlier_count = 0;
    std::size_t reported_days = 0;
    std::size_t total_days = 0;
    bool selected = false;
    std::optional<ExclusionReason> exclusion_reason;
};

/// Flags x_i when |x_i - median| > k * 1.4826 * MAD over a sliding window of `mad_window`
/// neighbours (shifted, not shrunk, at the edges). With MAD == 0 a point is flagged iff it
/// differs from the window median. Needs at least `mad_window` values.
std::vector<std::uint8_t> mad_outliers(std::span<const double> values, const Settings& settings = {});

/// Reporting statistics for one raw series; zero and absent days both count as not reported.
ScreeningReport measure(const DailySeries& series, const Settings& settings = {});

/// Applies the exclusion rules in order: low reporting, long gaps, then the regions with the
/// most outliers. Regions tied at the cut-off count are all excluded.
std::vector<ScreeningReport> select_regions(std::vector<ScreeningReport> reports, const Settings& settings = {});

/// `region,fraction,max_gap,outliers,selected,reason`, one row per report in input order.
std::string write_screening_csv(std::span<const ScreeningReport> reports);

} // namespace covtrend::screening

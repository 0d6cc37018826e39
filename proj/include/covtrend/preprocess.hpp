#pragma once

#include "covtrend/series.hpp"

namespace covtrend::preprocess {

struct Settings {
    /// A zero is treated as a missing report when exp(-λ) falls below this value.
    double p_zero_threshold = 0.01;
    /// Shortest zero run that is redistributed over the following report.
    int min_run_for_imputation = 1;
    /// Negative values before this day index have no weekly growth factor and become 0.
    int min_history_for_negative = 15;
};

/// Replaces each negative count by the count one week earlier times the growth of the two
/// preceding weekly sums, then rescales all earlier days by a common factor so the corrected
/// cumulative total at that day equals the raw cumulative total (negative included).
CleanSeries fix_negatives(const DailySeries& series, const Settings& settings = {});

/// Moves forecast_anchor back over trailing days that are absent, or zero while the Poisson
/// rate of the preceding week makes a zero implausible.
CleanSeries detect_trailing_missing(CleanSeries series, const Settings& settings = {});

/// Spreads the report that ends an implausible zero run (or an absent run) uniformly over the
/// run and the reporting day. Totals are unchanged.
CleanSeries impute_zero_runs(CleanSeries series, const Settings& settings = {});

/// fix_negatives -> impute_zero_runs -> detect_trailing_missing.
CleanSeries preprocess_pipeline(const DailySeries& series, const Settings& settings = {});

} // namespace covtrend::preprocess

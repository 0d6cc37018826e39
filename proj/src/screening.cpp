#include "covtrend/screening.hpp"

#include "covtrend/csv.hpp"
#include "covtrend/error.hpp"
#include "covtrend/stats.hpp"

#include <algorithm>
#include <cmath>

namespace covtrend::screening {

std::string_view to_string(ExclusionReason reason) {
    switch (reason) {
    case ExclusionReason::low_reporting: return "low_reporting";
    case ExclusionReason::long_gap: return "long_gap";
    case ExclusionReason::many_outliers: return "many_outliers";
    }
    return "";
}

std::vector<std::uint8_t> mad_outliers(std::span<const double> values, const Settings& settings) {
    const auto width = static_cast<std::size_t>(settings.mad_window);
    if (width < 3) {
        throw ContractError("MAD window must cover at least 3 days");
    }
    if (values.size() < width) {
        throw ContractError("MAD outlier detection needs at least " + std::to_string(width) + " values");
    }
    const std::size_t before = width / 2;
    std::vector<std::uint8_t> flags(values.size(), 0);
    std::vector<double> window(width);
    std::vector<double> deviation(width);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t first = std::min(i >= before ? i - before : 0, values.size() - width);
        std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(first), width, window.begin());
        const double med = stats::median(window);
        for (std::size_t j = 0; j < width; ++j) {
            deviation[j] = std::abs(window[j] - med);
        }
        const double mad = stats::median(deviation);
        const double distance = std::abs(values[i] - med);
        if (mad == 0.0) {
            flags[i] = distance != 0.0 ? 1 : 0;
        } else {
            flags[i] = distance > settings.mad_threshold_sd * settings.mad_scale * mad ? 1 : 0;
        }
    }
    return flags;
}

ScreeningReport measure(const DailySeries& series, const Settings& settings) {
    ScreeningReport r;
    r.region = series.region;
    r.total_days = series.size();
    int run = 0;
    for (const auto& v : series.values) {
        const bool reported = v && *v != 0.0;
        if (reported) {
            ++r.reported_days;
            run = 0;
        } else {
            r.max_missing_run = std::max(r.max_missing_run, ++run);
        }
    }
    r.reporting_fraction = r.total_days ? static_cast<double>(r.reported_days) / static_cast<double>(r.total_days) : 0.0;
    const auto dense = series.dense();
    if (dense.size() >= static_cast<std::size_t>(settings.mad_window)) {
        const auto flags = mad_outliers(dense, settings);
        r.outlier_count = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), std::uint8_t{1}));
    }
    return r;
}

std::vector<ScreeningReport> select_regions(std::vector<ScreeningReport> reports, const Settings& settings) {
    std::vector<ScreeningReport*> survivors;
    for (auto& r : reports) {
        r.selected = false;
        r.exclusion_reason.reset();
        // reported / total < p / 100 in integers, so exactly 70% stays in.
        if (r.total_days == 0 ||
            100 * r.reported_days < static_cast<std::size_t>(settings.min_reporting_percent) * r.total_days) {
            r.exclusion_reason = ExclusionReason::low_reporting;
        } else if (r.max_missing_run > settings.max_missing_run) {
            r.exclusion_reason = ExclusionReason::long_gap;
        } else {
            survivors.push_back(&r);
        }
    }
    std::stable_sort(survivors.begin(), survivors.end(),
                     [](const ScreeningReport* a, const ScreeningReport* b) { return a->outlier_count > b->outlier_count; });
    std::size_t cut = std::min(settings.n_exclude_outliers, survivors.size());
    if (cut > 0) {
        const std::size_t boundary = survivors[cut - 1]->outlier_count;
        while (cut < survivors.size() && survivors[cut]->outlier_count == boundary) {
            ++cut;
        }
    }
    for (std::size_t i = 0; i < survivors.size(); ++i) {
        if (i < cut) {
            survivors[i]->exclusion_reason = ExclusionReason::many_outliers;
        } else {
            survivors[i]->selected = true;
        }
    }
    return reports;
}

std::string write_screening_csv(std::span<const ScreeningReport> reports) {
    std::string out = "region,fraction,max_gap,outliers,selected,reason\n";
    for (const auto& r : reports) {
        out += csv::escape(r.region.label()) + "," + csv::format_fixed(r.reporting_fraction, 4) + "," +
               std::to_string(r.max_missing_run) + "," + std::to_string(r.outlier_count) + "," +
               (r.selected ? "true" : "false") + "," +
               (r.exclusion_reason ? std::string(to_string(*r.exclusion_reason)) : std::string()) + "\n";
    }
    return out;
}

} // namespace covtrend::screening

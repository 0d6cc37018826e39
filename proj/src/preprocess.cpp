#include "covtrend/preprocess.hpp"

#include "covtrend/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace covtrend::preprocess {

namespace {

double sum_days(const std::vector<double>& v, std::ptrdiff_t first, std::ptrdiff_t last) {
    double s = 0.0;
    for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(first, 0); i <= last; ++i) {
        s += v[static_cast<std::size_t>(i)];
    }
    return s;
}

// Mean of up to 7 values immediately before `end`; empty range yields NaN.
double poisson_rate_before(const std::vector<double>& v, std::size_t end) {
    const std::size_t first = end >= 7 ? end - 7 : 0;
    if (first == end) {
        return std::nan("");
    }
    return sum_days(v, static_cast<std::ptrdiff_t>(first), static_cast<std::ptrdiff_t>(end) - 1) /
           static_cast<double>(end - first);
}

bool implausible_zero(double rate, double threshold) {
    return std::isfinite(rate) && std::exp(-rate) < threshold;
}

} // namespace

CleanSeries fix_negatives(const DailySeries& series, const Settings& settings) {
    for (const auto& v : series.values) {
        if (v && !std::isfinite(*v)) {
            throw ContractError("series " + series.region.label() + " contains non-finite counts");
        }
    }
    CleanSeries out;
    out.region = series.region;
    out.start_date = series.start_date;
    out.kind = series.kind;
    out.values = series.dense();
    out.provenance.assign(out.values.size(), Provenance::observed);
    out.absent.resize(out.values.size());
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        out.absent[i] = series.values[i] ? 0 : 1;
    }
    out.forecast_anchor = out.values.empty() ? 0 : out.values.size() - 1;

    auto& v = out.values;
    double raw_cumulative = 0.0;
    for (std::size_t t = 0; t < v.size(); ++t) {
        raw_cumulative += v[t];
        if (v[t] >= 0.0) {
            continue;
        }
        const auto ti = static_cast<std::ptrdiff_t>(t);
        double estimate = 0.0;
        if (ti < settings.min_history_for_negative || ti < 14) {
            out.degenerate_negative = true;
        } else {
            const double last_week = sum_days(v, ti - 7, ti - 1);
            const double week_before = sum_days(v, ti - 14, ti - 8);
            double growth = 1.0;
            if (week_before > 0.0) {
                growth = last_week / week_before;
            } else {
                out.degenerate_growth = true;
            }
            estimate = v[t - 7] * growth;
        }
        // Earlier days absorb the reassessment so the cumulative count at t is unchanged.
        estimate = std::min(estimate, std::max(raw_cumulative, 0.0));
        const double prior = sum_days(v, 0, ti - 1);
        if (prior > 0.0) {
            const double factor = std::max(0.0, (raw_cumulative - estimate) / prior);
            if (factor != 1.0) {
                for (std::size_t i = 0; i < t; ++i) {
                    if (v[i] != 0.0) {
                        v[i] *= factor;
                        if (out.provenance[i] == Provenance::observed) {
                            out.provenance[i] = Provenance::rescaled;
                        }
                    }
                }
            }
        }
        v[t] = estimate;
        out.provenance[t] = Provenance::replaced;
    }
    return out;
}

CleanSeries detect_trailing_missing(CleanSeries series, const Settings& settings) {
    if (series.values.empty()) {
        return series;
    }
    auto& anchor = series.forecast_anchor;
    const auto is_absent = [&](std::size_t i) { return i < series.absent.size() && series.absent[i]; };
    while (anchor > 0 && is_absent(anchor)) {
        --anchor;
    }
    while (anchor > 0 && series.values[anchor] == 0.0 && series.provenance[anchor] == Provenance::observed) {
        if (!implausible_zero(poisson_rate_before(series.values, anchor), settings.p_zero_threshold)) {
            break;
        }
        --anchor;
    }
    return series;
}

CleanSeries impute_zero_runs(CleanSeries series, const Settings& settings) {
    auto& v = series.values;
    const std::size_t n = v.size();
    series.absent.resize(n, 0);
    std::size_t i = 0;
    while (i < n) {
        if (v[i] != 0.0) {
            ++i;
            continue;
        }
        const std::size_t run_start = i;
        bool has_absent = false;
        while (i < n && v[i] == 0.0) {
            has_absent = has_absent || series.absent[i];
            ++i;
        }
        const std::size_t run_end = i;   // index of the report that closes the run
        if (run_end >= n || run_start == 0) {
            continue;
        }
        const std::size_t length = run_end - run_start;
        if (!has_absent) {
            if (static_cast<int>(length) < settings.min_run_for_imputation ||
                !implausible_zero(poisson_rate_before(v, run_start), settings.p_zero_threshold)) {
                continue;
            }
        }
        const double share = v[run_end] / static_cast<double>(length + 1);
        for (std::size_t d = run_start; d <= run_end; ++d) {
            v[d] = share;
            series.provenance[d] = Provenance::imputed;
            series.absent[d] = 0;
        }
        i = run_end + 1;
    }
    return series;
}

CleanSeries preprocess_pipeline(const DailySeries& series, const Settings& settings) {
    return detect_trailing_missing(impute_zero_runs(fix_negatives(series, settings), settings), settings);
}

} // namespace covtrend::preprocess

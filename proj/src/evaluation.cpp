#include "covtrend/evaluation.hpp"

#include "covtrend/bspline.hpp"
#include "covtrend/error.hpp"
#include "covtrend/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace covtrend::evaluation {

namespace {

void require_monotone(const QuantileForecast& f) {
    for (std::size_t i = 1; i < f.quantiles.size(); ++i) {
        if (!(f.quantiles[i] >= f.quantiles[i - 1])) {
            throw IntegrityError("cannot score non-monotone quantiles");
        }
    }
}

} // namespace

double absolute_error(double forecast, double truth) {
    return std::abs(forecast - truth);
}

double interval_score(double lower, double upper, double alpha, double observation) {
    if (lower > upper) {
        throw ContractError("interval lower bound exceeds upper bound");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ContractError("interval level must lie in (0, 1)");
    }
    double score = upper - lower;
    if (observation < lower) {
        score += 2.0 / alpha * (lower - observation);
    } else if (observation > upper) {
        score += 2.0 / alpha * (observation - upper);
    }
    return score;
}

double wis(const QuantileForecast& forecast, double observation, bool normalized) {
    require_monotone(forecast);
    const auto& q = forecast.quantiles;
    double score = std::abs(observation - q[kMedianIndex]);
    for (std::size_t k = 0; k < kIntervalCount; ++k) {
        const double alpha = kQuantileLevels[k];
        score += alpha * interval_score(q[k], q[q.size() - 1 - k], 2.0 * alpha, observation);
    }
    return normalized ? score / (kIntervalCount + 0.5) : score;
}

int total_coverage(const QuantileForecast& forecast, double observation) {
    const auto& q = forecast.quantiles;
    int covered = 0;
    for (std::size_t k = 0; k < kIntervalCount; ++k) {
        if (q[k] <= observation && observation <= q[q.size() - 1 - k]) {
            ++covered;
        }
    }
    return covered;
}

ScoreSet aggregate_scores(std::span<const OriginRecord> records) {
    if (records.empty()) {
        throw ContractError("cannot aggregate an empty set of forecast origins");
    }
    std::vector<double> ae;
    ae.reserve(records.size());
    double wis_sum = 0.0;
    double coverage_sum = 0.0;
    for (const auto& r : records) {
        ae.push_back(r.abs_error);
        wis_sum += r.wis;
        coverage_sum += r.coverage;
    }
    const auto n = static_cast<double>(records.size());
    ScoreSet out;
    out.mae = stats::mean(ae);
    out.median_ae = stats::median(ae);
    out.mwis = wis_sum / n;
    out.mean_total_coverage = coverage_sum / n;
    out.n_origins = records.size();
    return out;
}

RelativeScores relative_scores(const ScoreSet& method, const ScoreSet& baseline) {
    const auto improvement = [](double b, double f) -> std::optional<double> {
        if (!(b > 0.0)) {
            return std::nullopt;
        }
        return (b - f) / b;
    };
    RelativeScores out;
    out.rmae = improvement(baseline.mae, method.mae);
    out.rmedian_ae = improvement(baseline.median_ae, method.median_ae);
    out.rwis = improvement(baseline.mwis, method.mwis);
    if (baseline.mean_total_coverage > 0.0) {
        out.rc = (method.mean_total_coverage - baseline.mean_total_coverage) / baseline.mean_total_coverage;
    }
    return out;
}

std::vector<std::optional<double>> growth_rates(std::span<const double> daily, std::span<const int> origins,
                                                double knot_spacing_weeks) {
    const std::size_t weeks = daily.size() / 7;
    if (weeks < 8) {
        throw ContractError("growth-rate spline needs at least 8 weekly points");
    }
    // Week w covers days [first + 7w, first + 7w + 6]; x is its midpoint in weeks.
    const std::size_t first = daily.size() - 7 * weeks;
    std::vector<double> x(weeks);
    std::vector<double> y(weeks);
    for (std::size_t w = 0; w < weeks; ++w) {
        double total = 0.0;
        for (std::size_t d = 0; d < 7; ++d) {
            total += daily[first + 7 * w + d];
        }
        x[w] = (static_cast<double>(first + 7 * w) + 3.0) / 7.0;
        y[w] = total;
    }
    const auto spline = bspline::PenalizedCubicSpline::fit(x, y, knot_spacing_weeks);

    std::vector<std::optional<double>> out;
    out.reserve(origins.size());
    for (int t : origins) {
        const double u = static_cast<double>(t) / 7.0;
        if (u < spline.lower() || u > spline.upper()) {
            out.emplace_back();
            continue;
        }
        const double level = spline.value(u);
        if (!(level > 0.0)) {
            out.emplace_back();
            continue;
        }
        out.emplace_back(spline.derivative(u) / level);
    }
    return out;
}

std::vector<StratumRow> growth_rate_stratification(std::span<const GrowthSample> samples, double bucket_width) {
    if (!(bucket_width > 0.0)) {
        throw ContractError("bucket width must be positive");
    }
    std::map<long long, std::pair<std::vector<double>, std::vector<double>>> buckets;
    for (const auto& s : samples) {
        if (!std::isfinite(s.growth_rate) || !std::isfinite(s.method_ape) || !std::isfinite(s.baseline_ape)) {
            continue;
        }
        // The small offset keeps exact multiples of the width (e.g. 0.03) in their own bin.
        const auto key = static_cast<long long>(std::floor(s.growth_rate / bucket_width + 1e-9));
        buckets[key].first.push_back(s.method_ape);
        buckets[key].second.push_back(s.baseline_ape);
    }
    static constexpr double kLevels[] = {0.25, 0.5, 0.75};
    std::vector<StratumRow> rows;
    for (const auto& [key, values] : buckets) {
        const auto m = stats::quantiles(values.first, kLevels);
        const auto b = stats::quantiles(values.second, kLevels);
        StratumRow row;
        row.bucket_lo = static_cast<double>(key) * bucket_width;
        row.bucket_hi = static_cast<double>(key + 1) * bucket_width;
        row.method_q25 = m[0];
        row.method_median = m[1];
        row.method_q75 = m[2];
        row.baseline_q25 = b[0];
        row.baseline_median = b[1];
        row.baseline_q75 = b[2];
        row.count = values.first.size();
        rows.push_back(row);
    }
    return rows;
}

} // namespace covtrend::evaluation

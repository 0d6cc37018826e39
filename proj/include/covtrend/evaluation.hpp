#pragma once

#include "covtrend/probabilistic.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace covtrend::evaluation {

inline constexpr int kIntervalCount = 11;

double absolute_error(double forecast, double truth);

/// (u - l) + (2 / alpha) [(l - xi) 1{xi < l} + (xi - u) 1{xi > u}]. Throws ContractError if l > u.
double interval_score(double lower, double upper, double alpha, double observation);

/// |xi - q(0.5)| + sum_k alpha_k IS_{2 alpha_k}([q_k, q_{24-k}], xi) over the 11 central intervals.
/// With `normalized` the sum is divided by K + 1/2. Throws IntegrityError on non-monotone quantiles.
double wis(const QuantileForecast& forecast, double observation, bool normalized = false);

/// Number of the 11 nested central intervals [q_k, q_{24-k}] containing the observation.
int total_coverage(const QuantileForecast& forecast, double observation);

/// Scores of one forecast origin.
struct OriginRecord {
    double abs_error = 0.0;
    double wis = 0.0;
    int coverage = 0;
};

struct ScoreSet {
    double mae = 0.0;
    double median_ae = 0.0;
    double mwis = 0.0;
    double mean_total_coverage = 0.0;
    std::size_t n_origins = 0;
};

/// Means and the median over the records. Throws ContractError when empty.
ScoreSet aggregate_scores(std::span<const OriginRecord> records);

/// Improvement over the baseline; positive means the method is better.
/// A component is empty when the baseline denominator is 0.
struct RelativeScores {
    std::optional<double> rmae;
    std::optional<double> rmedian_ae;
    std::optional<double> rwis;
    std::optional<double> rc;
};

RelativeScores relative_scores(const ScoreSet& method, const ScoreSet& baseline);

/// Growth rates per week of a smooth fit to weekly totals, evaluated at daily origins.
/// Weekly totals are formed over non-overlapping weeks ending on the last day of `daily`;
/// a penalized cubic B-spline with knots every 3 weeks is fitted to them.
/// Entries are empty where the spline value is not positive or the origin is outside the fit.
/// Throws ContractError with fewer than 8 complete weeks.
std::vector<std::optional<double>> growth_rates(std::span<const double> daily, std::span<const int> origins,
                                                double knot_spacing_weeks = 3.0);

struct GrowthSample {
    double growth_rate = 0.0;   // per week
    double method_ape = 0.0;
    double baseline_ape = 0.0;
};

struct StratumRow {
    double bucket_lo = 0.0;
    double bucket_hi = 0.0;
    double method_median = 0.0;
    double method_q25 = 0.0;
    double method_q75 = 0.0;
    double baseline_median = 0.0;
    double baseline_q25 = 0.0;
    double baseline_q75 = 0.0;
    std::size_t count = 0;
};

/// Pools samples into growth-rate bins of `bucket_width` (default one percentage point).
std::vector<StratumRow> growth_rate_stratification(std::span<const GrowthSample> samples,
                                                   double bucket_width = 0.01);

} // namespace covtrend::evaluation

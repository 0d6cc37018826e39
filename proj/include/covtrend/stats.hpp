#pragma once

#include <span>
#include <vector>

namespace covtrend::stats {

double mean(std::span<const double> xs);

/// Median; average of the two middle values for even sizes. Empty input throws ContractError.
double median(std::span<const double> xs);

/// Empirical quantile by linear interpolation of order statistics (Hyndman-Fan type 7):
/// h = (n-1)p, q = x[floor h] + (h - floor h)(x[floor h + 1] - x[floor h]).
/// `sorted` must be ascending and non-empty.
double quantile_sorted(std::span<const double> sorted, double p);

/// Type-7 quantiles at several levels; copies and sorts the input once.
std::vector<double> quantiles(std::span<const double> xs, std::span<const double> levels);

} // namespace covtrend::stats

#pragma once

#include "covtrend/date.hpp"
#include "covtrend/series.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace covtrend::synthetic {

/// Poisson counts with mean mu(t), t = 0..days-1. Deterministic for a given seed and standard library.
DailySeries poisson_series(const std::string& region, Date start, int days, const std::function<double(int)>& mu,
                           std::uint64_t seed);

/// mu(t) = level * growth^(t / 7), times an optional weekly reporting pattern (7 factors, mean 1).
std::function<double(int)> exponential_rate(double level, double weekly_growth,
                                            std::vector<double> weekday_pattern = {});

/// mu(t) = level (times the weekly pattern).
std::function<double(int)> flat_rate(double level, std::vector<double> weekday_pattern = {});

/// Panel of `regions` series named prefix01, prefix02, ... with seeds derived from `seed`.
std::vector<DailySeries> poisson_panel(const std::string& prefix, int regions, Date start, int days,
                                       const std::function<double(int)>& mu, std::uint64_t seed);

/// Normal noise N(0, sd) for t = 0..n-1.
std::vector<double> gaussian_noise(int n, double sd, std::uint64_t seed);

} // namespace covtrend::synthetic

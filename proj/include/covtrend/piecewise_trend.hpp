#pragma once

#include "covtrend/series.hpp"
#include "covtrend/smoothing.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace covtrend {

/// Smoothed daily trend aligned with the trusted part of a CleanSeries.
struct TrendEstimate {
    std::vector<double> values;
    std::vector<std::uint8_t> outlier_mask;   // 1 where the day was flagged
    int window_length = 42;
    /// Series shorter than one window: a single decomposition was used.
    bool degenerate = false;
    std::size_t windows = 0;

    std::size_t outlier_count() const;
};

namespace trend {

struct Settings {
    int window_length = 42;                 // days, even, >= 2 * period
    double outlier_weight_threshold = 0.1;  // on final STL robustness weights
    int period = 7;
    smoothing::StlParams stl;
};

/// Sigmoid weight σ(τ) = 1 / (1 + exp(a (τ - 1) - b)), a = 21.1 / L, b = 5.46.
double blend_weight(int tau, int window_length);

/// σ(τ) older(τ) + (1 - σ(τ)) newer(τ) for τ = 1..L/2. Both inputs must have L/2 values.
std::vector<double> blend_overlap(std::span<const double> older, std::span<const double> newer,
                                  int window_length);

/// Piecewise robust-STL trend. Windows of L days are laid out backward from the last day at
/// stride L/2, blended on their overlaps, and rescaled so that the trend sums to the input total.
/// Outlier days found by the first pass have their excess mass moved into earlier days and the
/// estimate is computed once more on the corrected counts.
TrendEstimate estimate_piecewise_trend(std::span<const double> counts, const Settings& settings = {});

/// Runs on values[0..forecast_anchor].
TrendEstimate estimate_piecewise_trend(const CleanSeries& series, const Settings& settings = {});

} // namespace trend
} // namespace covtrend

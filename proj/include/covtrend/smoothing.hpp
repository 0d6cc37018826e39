#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace covtrend::smoothing {

/// Local regression settings. `span` counts observations; empty robustness weights mean 1.
struct LoessConfig {
    int span = 7;
    int degree = 1;
    std::vector<double> robustness_weights;
};

struct LoessFit {
    std::vector<double> values;
    /// Points where the local design was singular and a weighted mean was used instead.
    std::size_t fallbacks = 0;
};

/// Fits, at every index, a tricube-weighted polynomial over the `span` nearest observations.
/// Windows shift (not shrink) at the series edges.
/// Throws ContractError for span > y.size(), span < degree + 2, degree outside {0, 1, 2},
/// or robustness weights of the wrong length or outside [0, 1].
LoessFit loess_fit(std::span<const double> y, const LoessConfig& config);

struct StlParams {
    int seasonal_span = 11;   // in cycles; odd
    int seasonal_degree = 1;
    std::optional<int> trend_span;     // default: nearest odd >= 1.5 p / (1 - 1.5 / seasonal_span)
    int trend_degree = 1;
    std::optional<int> lowpass_span;   // default: nearest odd >= period
    int lowpass_degree = 1;
    int inner_iterations = 2;
    int outer_iterations = 5;

    int resolved_trend_span(int period) const;
    int resolved_lowpass_span(int period) const;
};

/// Additive split y = trend + seasonal + residual with bisquare robustness weights
/// computed from the final residuals.
struct StlDecomposition {
    std::vector<double> trend;
    std::vector<double> seasonal;
    std::vector<double> residual;
    std::vector<double> robustness_weights;
};

/// Robust STL. Needs y.size() >= 2 * period (period >= 1).
/// With period == 1 the seasonal component is identically 0.
StlDecomposition stl_decompose(std::span<const double> y, int period, const StlParams& params = {});

/// Bisquare weights (1 - (|r| / 6m)^2)^2 clipped to [0, 1], m = median |r|.
/// All weights are 1 when m == 0.
std::vector<double> bisquare_weights(std::span<const double> residuals);

} // namespace covtrend::smoothing

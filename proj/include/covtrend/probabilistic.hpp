#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace covtrend {

/// The 23 hub quantile levels, ascending.
inline constexpr std::array<double, 23> kQuantileLevels = {
    0.01, 0.025, 0.05, 0.1,  0.15, 0.2,  0.25, 0.3,   0.35, 0.4, 0.45, 0.5,
    0.55, 0.6,   0.65, 0.7,  0.75, 0.8,  0.85, 0.9,   0.95, 0.975, 0.99};

/// The 19 interior levels 0.05, 0.10, ..., 0.95 estimated empirically.
inline constexpr std::array<double, 19> kInteriorLevels = {
    0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5,
    0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95};

inline constexpr std::size_t kMedianIndex = 11;   // position of 0.5 in kQuantileLevels

/// What a forecast predicts: the centred 7-day mean h days ahead, or the total of week k.
struct Target {
    enum class Kind { daily_mean, weekly_total };
    Kind kind = Kind::weekly_total;
    int step = 1;   // h in days or k in weeks

    static Target daily(int h) { return {Kind::daily_mean, h}; }
    static Target weekly(int k) { return {Kind::weekly_total, k}; }

    /// Days from the origin to the last day the target covers.
    int end_offset_days() const { return kind == Kind::weekly_total ? 7 * step : step; }
    /// "1wk", "7d": compact tag used in report files.
    std::string tag() const;

    friend bool operator==(const Target&, const Target&) = default;
};

struct QuantileForecast {
    Target target;
    std::array<double, 23> quantiles{};   // aligned with kQuantileLevels
    double point = 0.0;

    static constexpr const std::array<double, 23>& levels() { return kQuantileLevels; }
    double median() const { return quantiles[kMedianIndex]; }

    /// Monotone, finite, non-negative, and q(0.5) == point.
    bool satisfies_invariants() const;
    /// Throws IntegrityError naming the first violated invariant.
    void check_invariants() const;
};

namespace probabilistic {

struct Settings {
    int history_extra_days = 40;   // the window is history_extra_days + horizon_days origins
    int horizon_days = 14;
    std::size_t min_history = 15;
};

/// One past origin: what was forecast and what was eventually observed.
struct RetroSample {
    int origin = 0;                 // day index of the forecast origin
    double forecast = 0.0;          // f_{t,h} or F_{t,k}
    std::optional<double> truth;    // x̄_{t+h} or X_{t,k}; empty when not yet observed
};

struct ScaledErrorHistory {
    Target target;
    std::vector<double> errors;      // (truth - f) / sqrt(f), oldest first
    std::size_t window = 0;          // number of calendar origins inspected
    std::size_t skipped_zero = 0;    // origins dropped because f == 0
};

/// Scaled errors over the trailing `window` calendar origins ending at `last_origin`
/// (inclusive). Samples outside the window or without truth are ignored.
/// Throws InsufficientHistory when fewer than `settings.min_history` remain.
ScaledErrorHistory collect_scaled_errors(std::span<const RetroSample> samples, Target target,
                                         int last_origin, const Settings& settings = {});

/// Type-7 empirical quantiles at the 19 interior levels, shifted so the median is exactly 0.
std::array<double, 19> estimate_interior_quantiles(std::span<const double> errors);

/// Exponential-tail extrapolation to levels {0.01, 0.025, 0.975, 0.99} (in that order).
std::array<double, 4> extrapolate_tails(const std::array<double, 19>& interior);

/// Merges interior and tail quantiles into the 23-level layout.
std::array<double, 23> full_scaled_quantiles(const std::array<double, 19>& interior);

/// q = max(0, f + q̃ sqrt(f)). Throws IntegrityError when q̃ is not monotone or q̃(0.5) != 0.
QuantileForecast assemble_quantile_forecast(Target target, double point,
                                            const std::array<double, 23>& scaled);

/// Full path from retrospective samples to a QuantileForecast for the current origin.
QuantileForecast quantile_forecast(Target target, double point,
                                   std::span<const RetroSample> retro, int last_origin,
                                   const Settings& settings = {});

/// Weekly-total variant: the same machinery with F_{t,k} and X_{t,k} in place of f and x̄.
QuantileForecast weekly_quantile_forecast(int k, double weekly_point,
                                          std::span<const RetroSample> retro_weekly, int last_origin,
                                          const Settings& settings = {});

/// Baseline intervals from symmetrized past errors {e} ∪ {-e} of the constant-week baseline,
/// added to `point` and floored at 0. Type-7 quantiles at all 23 levels.
/// Throws InsufficientHistory when fewer than `min_history` errors are available.
QuantileForecast baseline_quantiles(Target target, double point, std::span<const double> past_errors,
                                    std::size_t min_history = 15);

/// Series-level baseline quantiles for week k at origin t: past errors X_{s,k} - B_s of the
/// constant-week baseline over the trailing window of origins whose truth is known at t.
QuantileForecast baseline_quantiles(std::span<const double> values, int t, int k,
                                    const Settings& settings = {});

} // namespace probabilistic
} // namespace covtrend

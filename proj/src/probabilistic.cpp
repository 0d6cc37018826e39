#include "covtrend/probabilistic.hpp"

#include "covtrend/error.hpp"
#include "covtrend/forecast.hpp"
#include "covtrend/stats.hpp"

#include <algorithm>
#include <cmath>

namespace covtrend {

std::string Target::tag() const {
    return std::to_string(step) + (kind == Kind::weekly_total ? "wk" : "d");
}

bool QuantileForecast::satisfies_invariants() const {
    for (std::size_t i = 0; i < quantiles.size(); ++i) {
        if (!std::isfinite(quantiles[i]) || quantiles[i] < 0.0) {
            return false;
        }
        if (i > 0 && quantiles[i] < quantiles[i - 1]) {
            return false;
        }
    }
    return std::isfinite(point) && point >= 0.0 && quantiles[kMedianIndex] == point;
}

void QuantileForecast::check_invariants() const {
    for (std::size_t i = 0; i < quantiles.size(); ++i) {
        if (!std::isfinite(quantiles[i])) {
            throw IntegrityError("quantile at level " + std::to_string(kQuantileLevels[i]) + " is not finite");
        }
        if (quantiles[i] < 0.0) {
            throw IntegrityError("quantile at level " + std::to_string(kQuantileLevels[i]) + " is negative");
        }
        if (i > 0 && quantiles[i] < quantiles[i - 1]) {
            throw IntegrityError("quantiles are not monotone at level " + std::to_string(kQuantileLevels[i]));
        }
    }
    if (!std::isfinite(point) || point < 0.0) {
        throw IntegrityError("point forecast is negative or not finite");
    }
    if (quantiles[kMedianIndex] != point) {
        throw IntegrityError("median quantile differs from the point forecast");
    }
}

namespace probabilistic {

ScaledErrorHistory collect_scaled_errors(std::span<const RetroSample> samples, Target target,
                                         int last_origin, const Settings& settings) {
    ScaledErrorHistory history;
    history.target = target;
    history.window = static_cast<std::size_t>(settings.history_extra_days + settings.horizon_days);
    const int first_origin = last_origin - static_cast<int>(history.window) + 1;

    for (const auto& s : samples) {
        if (s.origin < first_origin || s.origin > last_origin || !s.truth) {
            continue;
        }
        if (!(s.forecast > 0.0)) {
            ++history.skipped_zero;
            continue;
        }
        history.errors.push_back((*s.truth - s.forecast) / std::sqrt(s.forecast));
    }
    if (history.errors.size() < settings.min_history) {
        throw InsufficientHistory("only " + std::to_string(history.errors.size()) +
                                  " usable retrospective forecasts for target " + target.tag() +
                                  " (need " + std::to_string(settings.min_history) + ")");
    }
    return history;
}

std::array<double, 19> estimate_interior_quantiles(std::span<const double> errors) {
    if (errors.empty()) {
        throw InsufficientHistory("no scaled errors to estimate quantiles from");
    }
    const auto q = stats::quantiles(errors, kInteriorLevels);
    std::array<double, 19> out{};
    const double shift = q[9];
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = q[i] - shift;
    }
    out[9] = 0.0;
    return out;
}

std::array<double, 4> extrapolate_tails(const std::array<double, 19>& interior) {
    // Exponential tails: q(1-a) = q(0.95) + theta ln(0.05/a), theta from the 0.90/0.95 pair.
    const double q05 = interior.front();
    const double q10 = interior[1];
    const double q90 = interior[17];
    const double q95 = interior.back();
    const double ln2 = std::log(0.10 / 0.05);
    const double theta_up = std::max(0.0, (q95 - q90) / ln2);
    const double theta_lo = std::max(0.0, (q10 - q05) / ln2);
    return {q05 - theta_lo * std::log(0.05 / 0.01), q05 - theta_lo * std::log(0.05 / 0.025),
            q95 + theta_up * std::log(0.05 / 0.025), q95 + theta_up * std::log(0.05 / 0.01)};
}

std::array<double, 23> full_scaled_quantiles(const std::array<double, 19>& interior) {
    const auto tails = extrapolate_tails(interior);
    std::array<double, 23> out{};
    out[0] = tails[0];
    out[1] = tails[1];
    std::copy(interior.begin(), interior.end(), out.begin() + 2);
    out[21] = tails[2];
    out[22] = tails[3];
    return out;
}

QuantileForecast assemble_quantile_forecast(Target target, double point,
                                            const std::array<double, 23>& scaled) {
    if (!std::isfinite(point) || point < 0.0) {
        throw ContractError("point forecast must be finite and non-negative");
    }
    for (std::size_t i = 1; i < scaled.size(); ++i) {
        if (!(scaled[i] >= scaled[i - 1])) {
            throw IntegrityError("scaled quantiles are not monotone");
        }
    }
    if (scaled[kMedianIndex] != 0.0) {
        throw IntegrityError("scaled median quantile must be 0");
    }
    QuantileForecast out;
    out.target = target;
    out.point = point;
    const double root = std::sqrt(point);
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        out.quantiles[i] = std::max(0.0, point + scaled[i] * root);
    }
    out.quantiles[kMedianIndex] = point;
    return out;
}

QuantileForecast quantile_forecast(Target target, double point, std::span<const RetroSample> retro,
                                   int last_origin, const Settings& settings) {
    const auto history = collect_scaled_errors(retro, target, last_origin, settings);
    const auto interior = estimate_interior_quantiles(history.errors);
    return assemble_quantile_forecast(target, point, full_scaled_quantiles(interior));
}

QuantileForecast weekly_quantile_forecast(int k, double weekly_point,
                                          std::span<const RetroSample> retro_weekly, int last_origin,
                                          const Settings& settings) {
    if (k != 1 && k != 2) {
        throw ContractError("weekly targets support k = 1 or 2 only");
    }
    return quantile_forecast(Target::weekly(k), weekly_point, retro_weekly, last_origin, settings);
}

QuantileForecast baseline_quantiles(Target target, double point, std::span<const double> past_errors,
                                    std::size_t min_history) {
    if (past_errors.size() < min_history) {
        throw InsufficientHistory("only " + std::to_string(past_errors.size()) +
                                  " past baseline errors (need " + std::to_string(min_history) + ")");
    }
    if (!std::isfinite(point) || point < 0.0) {
        throw ContractError("baseline point must be finite and non-negative");
    }
    std::vector<double> symmetric;
    symmetric.reserve(2 * past_errors.size());
    for (double e : past_errors) {
        symmetric.push_back(e);
        symmetric.push_back(-e);
    }
    const auto q = stats::quantiles(symmetric, kQuantileLevels);
    QuantileForecast out;
    out.target = target;
    out.point = point;
    for (std::size_t i = 0; i < q.size(); ++i) {
        out.quantiles[i] = std::max(0.0, point + q[i]);
    }
    out.quantiles[kMedianIndex] = point;
    return out;
}

QuantileForecast baseline_quantiles(std::span<const double> values, int t, int k, const Settings& settings) {
    if (k != 1 && k != 2) {
        throw ContractError("weekly targets support k = 1 or 2 only");
    }
    const auto n = static_cast<int>(values.size());
    if (t < 0 || t >= n) {
        throw ContractError("origin outside the series");
    }
    const int window = settings.history_extra_days + settings.horizon_days;
    std::vector<double> errors;
    // Truth for origin s is complete once s + 7k <= t.
    const int last = t - 7 * k;
    for (int s = std::max(6, last - window + 1); s <= last; ++s) {
        const double predicted = forecast::previous_week_total(values, s);
        const double observed = forecast::weekly_total(values, s, k).total;
        errors.push_back(observed - predicted);
    }
    return baseline_quantiles(Target::weekly(k), forecast::previous_week_total(values, t), errors,
                              settings.min_history);
}

} // namespace probabilistic
} // namespace covtrend

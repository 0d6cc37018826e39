#include "covtrend/pipeline.hpp"

#include "covtrend/error.hpp"
#include "covtrend/preprocess.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <span>
#include <thread>
#include <utility>

namespace covtrend::pipeline {

double OriginForecast::weekly(int k) const {
    if (k < 1 || static_cast<std::size_t>(7 * k) > daily.size()) {
        throw ContractError("weekly total needs a horizon of 7k days");
    }
    const auto begin = daily.begin() + 7 * (k - 1);
    return std::accumulate(begin, begin + 7, 0.0);
}

OriginForecast method_forecast(const CleanSeries& clean, const Config& config) {
    if (clean.values.empty()) {
        throw InsufficientHistory("empty series");
    }
    const int origin = static_cast<int>(clean.size()) - 1;
    const int anchor = static_cast<int>(clean.forecast_anchor);
    if (anchor < config.forecast.slope_window) {
        throw InsufficientHistory("need " + std::to_string(config.forecast.slope_window + 1) +
                                  " trusted days before the origin");
    }
    const auto trend = trend::estimate_piecewise_trend(clean, config.trend);
    const int gap = origin - anchor;
    const auto point = forecast::extrapolate(trend.values, anchor, config.forecast.horizon_days + gap,
                                             config.forecast.slope_window);
    OriginForecast out;
    out.origin = origin;
    out.anchor = anchor;
    out.scale_mode = point.scale_mode;
    out.daily.assign(point.values.begin() + gap, point.values.end());
    return out;
}

RegionRunner::RegionRunner(DailySeries raw, Config config, VintageMode mode)
    : raw_(std::move(raw)), config_(std::move(config)), mode_(mode) {}

const CleanSeries& RegionRunner::clean_at(int t) {
    if (t < 0 || t > last_index()) {
        throw ContractError("origin outside the series");
    }
    const int key = mode_ == VintageMode::final ? last_index() : t;
    auto it = clean_.find(key);
    if (it == clean_.end()) {
        auto clean = preprocess::preprocess_pipeline(raw_.truncated(raw_.date_at(static_cast<std::size_t>(key))),
                                                     config_.preprocess);
        it = clean_.emplace(key, std::move(clean)).first;
    }
    return it->second;
}

const std::optional<OriginForecast>& RegionRunner::method_at(int s) {
    auto it = method_.find(s);
    if (it != method_.end()) {
        return it->second;
    }
    std::optional<OriginForecast> result;
    if (s >= 0 && s <= last_index()) {
        CleanSeries view = clean_at(s);
        if (mode_ == VintageMode::final) {
            const auto keep = static_cast<std::size_t>(s) + 1;
            view.values.resize(keep);
            view.provenance.resize(keep);
            view.absent.resize(keep);
            view.forecast_anchor = std::min(view.forecast_anchor, static_cast<std::size_t>(s));
        }
        try {
            result = method_forecast(view, config_);
        } catch (const InsufficientHistory&) {
        } catch (const ContractError&) {
        }
    }
    return method_.emplace(s, std::move(result)).first->second;
}

std::vector<double> RegionRunner::truths(int t, Target target, int first, int last) {
    // Entry i is the truth for origin first + i as known at t, NaN when not yet observed.
    const auto& clean = clean_at(t);
    const int known = std::min(static_cast<int>(clean.forecast_anchor), t);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max(0, last - first + 1)));
    for (int s = first; s <= last; ++s) {
        double v = std::numeric_limits<double>::quiet_NaN();
        if (s >= 0) {
            if (target.kind == Target::Kind::weekly_total) {
                if (s + 7 * target.step <= known) {
                    v = forecast::weekly_total(clean.values, s, target.step).total;
                }
            } else if (s + target.step + 3 <= known) {
                v = forecast::centred_mean(clean.values, s + target.step).value_or(v);
            }
        }
        out.push_back(v);
    }
    return out;
}

QuantileForecast RegionRunner::method_quantiles(int t, Target target) {
    const auto& at_t = method_at(t);
    if (!at_t) {
        throw InsufficientHistory("no method forecast at origin");
    }
    const double point = target.kind == Target::Kind::weekly_total
                             ? at_t->weekly(target.step)
                             : at_t->daily.at(static_cast<std::size_t>(target.step - 1));
    const int last = target.kind == Target::Kind::weekly_total ? t - 7 * target.step : t - target.step - 3;
    const int window = config_.probabilistic.history_extra_days + config_.probabilistic.horizon_days;
    const int first = last - window + 1;
    const auto truth = truths(t, target, first, last);
    std::vector<probabilistic::RetroSample> retro;
    for (int s = first; s <= last; ++s) {
        const auto& f = method_at(s);
        if (!f) {
            continue;
        }
        probabilistic::RetroSample sample;
        sample.origin = s;
        sample.forecast = target.kind == Target::Kind::weekly_total
                              ? f->weekly(target.step)
                              : f->daily[static_cast<std::size_t>(target.step - 1)];
        const double v = truth[static_cast<std::size_t>(s - first)];
        if (!std::isnan(v)) {
            sample.truth = v;
        }
        retro.push_back(sample);
    }
    return probabilistic::quantile_forecast(target, point, retro, last, config_.probabilistic);
}

QuantileForecast RegionRunner::baseline_quantiles(int t, Target target) {
    const auto& clean = clean_at(t);
    std::span<const double> values(clean.values.data(), static_cast<std::size_t>(t) + 1);
    if (target.kind == Target::Kind::weekly_total) {
        return probabilistic::baseline_quantiles(values, t, target.step, config_.probabilistic);
    }
    const int h = target.step;
    const double point = forecast::previous_week_total(values, t) / 7.0;
    const int window = config_.probabilistic.history_extra_days + config_.probabilistic.horizon_days;
    const int last = t - h - 3;
    std::vector<double> errors;
    for (int s = std::max(6, last - window + 1); s <= last; ++s) {
        const auto truth = forecast::centred_mean(values, s + h);
        if (truth) {
            errors.push_back(*truth - forecast::previous_week_total(values, s) / 7.0);
        }
    }
    return probabilistic::baseline_quantiles(target, point, errors, config_.probabilistic.min_history);
}

RegionForecast run_region_forecast(const DailySeries& raw, const Config& config) {
    if (raw.size() == 0) {
        throw InsufficientHistory("region " + raw.region.label() + " has no data");
    }
    RegionRunner runner(raw, config);
    const int t = runner.last_index();
    RegionForecast out;
    out.region = raw.region;
    out.kind = raw.kind;
    out.origin = t;
    out.origin_date = raw.date_at(static_cast<std::size_t>(t));
    out.clean = runner.clean_at(t);
    const auto& point = runner.method_at(t);
    if (!point) {
        throw InsufficientHistory("region " + raw.region.label() + " has too little trusted history");
    }
    out.point = *point;
    out.trend = trend::estimate_piecewise_trend(out.clean, config.trend);
    for (int k = 1; k <= 2; ++k) {
        out.weekly.push_back(runner.method_quantiles(t, Target::weekly(k)));
    }
    try {
        for (int h = 1; h <= 7; ++h) {
            out.daily.push_back(runner.method_quantiles(t, Target::daily(h)));
        }
    } catch (const InsufficientHistory&) {
        out.daily.clear();
    }
    return out;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    const auto workers = static_cast<std::size_t>(std::clamp(threads, 1, 256));
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(n);
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w) {
        pool.emplace_back(work);
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

bool glob_match(std::string_view pattern, std::string_view text) {
    std::size_t p = 0;
    std::size_t s = 0;
    std::size_t star = std::string_view::npos;
    std::size_t resume = 0;
    while (s < text.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[s])) {
            ++p;
            ++s;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            resume = s;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            s = ++resume;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') {
        ++p;
    }
    return p == pattern.size();
}

} // namespace covtrend::pipeline

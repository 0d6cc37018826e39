#include "covtrend/backtest.hpp"

#include "covtrend/csv.hpp"
#include "covtrend/error.hpp"
#include "covtrend/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace covtrend::backtest {

namespace {

// Ground truth re-indexed on the data's day grid; NaN where it has no value.
std::vector<double> align_truth(const DailySeries& data, const DailySeries& truth, std::size_t length) {
    std::vector<double> out(length, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < length; ++i) {
        const int j = data.date_at(i) - truth.start_date;
        if (j >= 0 && static_cast<std::size_t>(j) < truth.size()) {
            out[i] = truth.values[static_cast<std::size_t>(j)].value_or(0.0);
        }
    }
    return out;
}

std::optional<double> observed(const std::vector<double>& truth, int t, Target target) {
    int lo = t + 1;
    int hi = t + 7 * target.step;
    if (target.kind == Target::Kind::daily_mean) {
        lo = t + target.step - 3;
        hi = t + target.step + 3;
    }
    if (lo < 0 || static_cast<std::size_t>(hi) >= truth.size()) {
        return std::nullopt;
    }
    double sum = 0.0;
    for (int i = lo; i <= hi; ++i) {
        const double v = truth[static_cast<std::size_t>(i)];
        if (std::isnan(v)) {
            return std::nullopt;
        }
        sum += v;
    }
    return target.kind == Target::Kind::daily_mean ? sum / 7.0 : sum;
}

evaluation::OriginRecord score(const QuantileForecast& f, double truth, bool normalized) {
    return {evaluation::absolute_error(f.point, truth), evaluation::wis(f, truth, normalized),
            evaluation::total_coverage(f, truth)};
}

std::string opt(const std::optional<double>& v) {
    return v ? csv::format_shortest(*v) : std::string("NA");
}

} // namespace

void BacktestConfig::validate() const {
    if (!(start_date < end_date)) {
        throw ContractError("backtest start date must precede the end date");
    }
    if (daily_horizons.empty() && weekly_horizons.empty()) {
        throw ContractError("backtest needs at least one horizon");
    }
    for (int h : daily_horizons) {
        if (h < 1 || h > 14) {
            throw ContractError("daily horizons must lie in 1..14");
        }
    }
    for (int k : weekly_horizons) {
        if (k != 1 && k != 2) {
            throw ContractError("weekly horizons must be 1 or 2");
        }
    }
}

std::vector<Target> BacktestConfig::targets() const {
    std::vector<Target> out;
    for (int k : weekly_horizons) {
        out.push_back(Target::weekly(k));
    }
    for (int h : daily_horizons) {
        out.push_back(Target::daily(h));
    }
    return out;
}

RegionBacktest backtest_region(const DailySeries& data, const DailySeries& ground_truth,
                               const BacktestConfig& backtest, const Config& config) {
    backtest.validate();
    RegionBacktest out;
    out.region = data.region;
    if (data.size() == 0) {
        return out;
    }
    const int first = std::max(0, backtest.start_date - data.start_date);
    const int last = std::min(static_cast<int>(data.size()) - 1, backtest.end_date - data.start_date);

    // The truth grid extends past the data so that forecasts made near its end can be scored.
    const std::size_t grid = data.size() + 14;
    const auto truth = align_truth(data, ground_truth, grid);
    pipeline::RegionRunner runner(data, config, backtest.vintage_mode);
    const auto targets = backtest.targets();

    std::vector<std::vector<evaluation::OriginRecord>> method_records(targets.size());
    std::vector<std::vector<evaluation::OriginRecord>> baseline_records(targets.size());
    std::vector<int> growth_origins;
    std::vector<std::pair<double, double>> growth_ape;

    for (int t = first; t <= last; ++t) {
        bool complete = true;
        for (std::size_t i = 0; i < targets.size(); ++i) {
            const Target target = targets[i];
            const auto x = observed(truth, t, target);
            if (!x) {
                complete = false;
                continue;
            }
            try {
                const auto baseline = runner.baseline_quantiles(t, target);
                const auto method = backtest.force_baseline ? baseline : runner.method_quantiles(t, target);
                method_records[i].push_back(score(method, *x, config.wis_normalized));
                baseline_records[i].push_back(score(baseline, *x, config.wis_normalized));
                if (target == Target::weekly(1) && *x > 0.0) {
                    growth_origins.push_back(t);
                    growth_ape.emplace_back(std::abs(method.point - *x) / *x, std::abs(baseline.point - *x) / *x);
                }
            } catch (const InsufficientHistory&) {
                complete = false;
            } catch (const ContractError&) {
                complete = false;
            }
        }
        ++(complete ? out.evaluated_origins : out.skipped_origins);
    }

    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (method_records[i].empty()) {
            continue;
        }
        TargetScores s;
        s.target = targets[i];
        s.method = evaluation::aggregate_scores(method_records[i]);
        s.baseline = evaluation::aggregate_scores(baseline_records[i]);
        s.relative = evaluation::relative_scores(s.method, s.baseline);
        out.targets.push_back(s);
    }

    if (!growth_origins.empty()) {
        // Growth is estimated ex post from the whole ground-truth history on the data's grid.
        std::vector<double> daily;
        for (double v : truth) {
            if (std::isnan(v)) {
                break;
            }
            daily.push_back(v);
        }
        try {
            const auto rates = evaluation::growth_rates(daily, growth_origins);
            for (std::size_t j = 0; j < rates.size(); ++j) {
                if (rates[j]) {
                    out.growth.push_back({*rates[j], growth_ape[j].first, growth_ape[j].second});
                }
            }
        } catch (const ContractError&) {
        }
    }
    return out;
}

BacktestReport run_backtest(std::span<const DailySeries> data, std::span<const DailySeries> ground_truth,
                            const BacktestConfig& backtest, const Config& config, int threads) {
    backtest.validate();
    BacktestReport report;
    report.regions.resize(data.size());
    pipeline::parallel_for(data.size(), threads, [&](std::size_t i) {
        const auto match = std::find_if(ground_truth.begin(), ground_truth.end(), [&](const DailySeries& g) {
            return g.region == data[i].region && g.kind == data[i].kind;
        });
        report.regions[i] = backtest_region(data[i], match == ground_truth.end() ? data[i] : *match, backtest, config);
    });
    std::vector<evaluation::GrowthSample> samples;
    for (const auto& r : report.regions) {
        report.skipped_origins += r.skipped_origins;
        samples.insert(samples.end(), r.growth.begin(), r.growth.end());
    }
    report.stratification = evaluation::growth_rate_stratification(samples);
    return report;
}

std::string write_scores_csv(const BacktestReport& report) {
    std::string out = "region,metric,method,baseline,relative\n";
    for (const auto& r : report.regions) {
        const std::string region = csv::escape(r.region.label());
        for (const auto& t : r.targets) {
            const std::string tag = t.target.tag();
            auto row = [&](const char* name, double m, double b, const std::optional<double>& rel) {
                out += region + "," + tag + "_" + name + "," + csv::format_shortest(m) + "," +
                       csv::format_shortest(b) + "," + opt(rel) + "\n";
            };
            row("mae", t.method.mae, t.baseline.mae, t.relative.rmae);
            row("median_ae", t.method.median_ae, t.baseline.median_ae, t.relative.rmedian_ae);
            row("mwis", t.method.mwis, t.baseline.mwis, t.relative.rwis);
            row("coverage", t.method.mean_total_coverage, t.baseline.mean_total_coverage, t.relative.rc);
        }
    }
    return out;
}

std::string write_stratification_csv(const BacktestReport& report) {
    std::string out =
        "bucket_lo,bucket_hi,method_median,method_q25,method_q75,baseline_median,baseline_q25,baseline_q75\n";
    for (const auto& s : report.stratification) {
        out += csv::format_fixed(s.bucket_lo, 2) + "," + csv::format_fixed(s.bucket_hi, 2) + "," +
               csv::format_shortest(s.method_median) + "," + csv::format_shortest(s.method_q25) + "," +
               csv::format_shortest(s.method_q75) + "," + csv::format_shortest(s.baseline_median) + "," +
               csv::format_shortest(s.baseline_q25) + "," + csv::format_shortest(s.baseline_q75) + "\n";
    }
    return out;
}

} // namespace covtrend::backtest

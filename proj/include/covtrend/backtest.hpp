#pragma once

#include "covtrend/config.hpp"
#include "covtrend/date.hpp"
#include "covtrend/evaluation.hpp"
#include "covtrend/pipeline.hpp"
#include "covtrend/series.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace covtrend::backtest {

struct BacktestConfig {
    Date start_date;
    Date end_date;
    std::vector<int> daily_horizons;            // subset of 1..14
    std::vector<int> weekly_horizons{1, 2};     // subset of {1, 2}
    std::optional<std::string> ground_truth_snapshot;
    pipeline::VintageMode vintage_mode = pipeline::VintageMode::as_of;
    /// Replaces the method by the baseline; every relative score is then 0.
    bool force_baseline = false;

    /// start < end, horizons non-empty and in range. Throws ContractError.
    void validate() const;
    std::vector<Target> targets() const;
};

struct TargetScores {
    Target target;
    evaluation::ScoreSet method;
    evaluation::ScoreSet baseline;
    evaluation::RelativeScores relative;
};

struct RegionBacktest {
    RegionKey region;
    std::vector<TargetScores> targets;             // targets with at least one scored origin
    std::vector<evaluation::GrowthSample> growth;  // 1-week-ahead samples with a growth estimate
    std::size_t evaluated_origins = 0;
    std::size_t skipped_origins = 0;               // origins where some target could not be scored
};

struct BacktestReport {
    std::vector<RegionBacktest> regions;
    std::vector<evaluation::StratumRow> stratification;
    std::size_t skipped_origins = 0;
};

/// Scores every origin in [start_date, end_date] of one region. `ground_truth` is matched by date.
RegionBacktest backtest_region(const DailySeries& data, const DailySeries& ground_truth,
                               const BacktestConfig& backtest, const Config& config);

/// Regions of `data` without a ground-truth series are scored against themselves.
/// Output order follows `data`, independent of `threads`.
BacktestReport run_backtest(std::span<const DailySeries> data, std::span<const DailySeries> ground_truth,
                            const BacktestConfig& backtest, const Config& config, int threads = 1);

/// `region,metric,method,baseline,relative`; metric is `<target>_<mae|median_ae|mwis|coverage>`.
std::string write_scores_csv(const BacktestReport& report);
std::string write_stratification_csv(const BacktestReport& report);

} // namespace covtrend::backtest

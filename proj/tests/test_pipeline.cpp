#include "covtrend/backtest.hpp"
#include "covtrend/error.hpp"
#include "covtrend/pipeline.hpp"
#include "covtrend/svg_plot.hpp"
#include "covtrend/synthetic.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace covtrend;
using pipeline::VintageMode;
using test_support::series_of;

namespace {

const Date kStart = Date::from_ymd(2020, 3, 1);

backtest::BacktestConfig window(int first, int last) {
    backtest::BacktestConfig b;
    b.start_date = kStart + first;
    b.end_date = kStart + last;
    b.daily_horizons = {1, 7};
    return b;
}

} // namespace

TEST_CASE("glob matching") {
    CHECK(pipeline::glob_match("*", "Germany"));
    CHECK(pipeline::glob_match("Ger*", "Germany"));
    CHECK(pipeline::glob_match("G?rmany", "Germany"));
    CHECK(pipeline::glob_match("*/Bavaria", "Germany/Bavaria"));
    CHECK_FALSE(pipeline::glob_match("Ger", "Germany"));
    CHECK_FALSE(pipeline::glob_match("?", ""));
    CHECK(pipeline::glob_match("", ""));
}

TEST_CASE("parallel_for visits every index once and rethrows") {
    std::vector<std::atomic<int>> hits(100);
    pipeline::parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) {
        CHECK(h.load() == 1);
    }
    CHECK_THROWS_AS(pipeline::parallel_for(10, 3,
                                           [](std::size_t i) {
                                               if (i == 7) throw std::runtime_error("boom");
                                           }),
                    std::runtime_error);
}

TEST_CASE("constant series forecast") {
    const auto raw = series_of(test_support::repeat(50.0, 126), "Flat", kStart);
    const auto f = pipeline::run_region_forecast(raw, Config{});
    CHECK(f.origin == 125);
    CHECK(f.origin_date == kStart + 125);
    REQUIRE(f.weekly.size() == 2);
    CHECK(f.weekly[0].point == doctest::Approx(350.0).epsilon(1e-6));
    CHECK(f.weekly[1].point == doctest::Approx(350.0).epsilon(1e-6));
    for (const auto& q : f.weekly) {
        CHECK(q.satisfies_invariants());
        for (double v : q.quantiles) {
            CHECK(v == doctest::Approx(350.0).epsilon(1e-6));
        }
    }
    REQUIRE(f.daily.size() == 7);
    for (const auto& q : f.daily) {
        CHECK(q.point == doctest::Approx(50.0).epsilon(1e-6));
    }
}

TEST_CASE("short series cannot be forecast") {
    const auto raw = series_of(test_support::repeat(50.0, 30), "Short", kStart);
    CHECK_THROWS_AS(pipeline::run_region_forecast(raw, Config{}), InsufficientHistory);
}

TEST_CASE("method forecast indexes days from the origin") {
    std::vector<double> v;
    for (int t = 0; t < 100; ++t) {
        v.push_back(20.0 + t);
    }
    const auto clean = preprocess::preprocess_pipeline(series_of(v));
    const auto f = pipeline::method_forecast(clean, Config{});
    CHECK(f.origin == 99);
    CHECK(f.scale_mode == ScaleMode::linear);
    REQUIRE(f.daily.size() == 14);
    CHECK(f.weekly(1) == doctest::Approx(f.daily[0] + f.daily[1] + f.daily[2] + f.daily[3] + f.daily[4] +
                                         f.daily[5] + f.daily[6]));
    CHECK(f.daily[13] > f.daily[0]);
}

TEST_CASE("as-of forecasts ignore later data") {
    auto panel = synthetic::poisson_panel("R", 1, kStart, 160, synthetic::exponential_rate(200, 1.05), 3);
    auto poisoned = panel[0];
    for (std::size_t i = 121; i < poisoned.size(); ++i) {
        poisoned.values[i] = 1e6;
    }
    // A later correction is spread back over the history; only the final vintage sees it.
    poisoned.values[140] = -20000.0;
    pipeline::RegionRunner a(panel[0], Config{}, VintageMode::as_of);
    pipeline::RegionRunner b(poisoned, Config{}, VintageMode::as_of);
    for (int t : {100, 110, 120}) {
        for (auto target : {Target::weekly(1), Target::weekly(2), Target::daily(3)}) {
            const auto qa = a.method_quantiles(t, target);
            const auto qb = b.method_quantiles(t, target);
            CHECK(qa.quantiles == qb.quantiles);
            CHECK(a.baseline_quantiles(t, target).quantiles == b.baseline_quantiles(t, target).quantiles);
        }
    }
    pipeline::RegionRunner c(poisoned, Config{}, VintageMode::final);
    CHECK(c.method_quantiles(120, Target::weekly(1)).quantiles != a.method_quantiles(120, Target::weekly(1)).quantiles);
}

TEST_CASE("backtest configuration checks") {
    auto b = window(80, 70);
    CHECK_THROWS_AS(b.validate(), ContractError);
    b = window(70, 80);
    b.daily_horizons = {15};
    CHECK_THROWS_AS(b.validate(), ContractError);
    b.daily_horizons.clear();
    b.weekly_horizons = {3};
    CHECK_THROWS_AS(b.validate(), ContractError);
    b.weekly_horizons.clear();
    CHECK_THROWS_AS(b.validate(), ContractError);
    b = window(70, 80);
    CHECK_NOTHROW(b.validate());
    CHECK(b.targets().size() == 4);
}

TEST_CASE("forced baseline gives zero relative scores") {
    const auto panel = synthetic::poisson_panel("G", 2, kStart, 150, synthetic::exponential_rate(300, 1.05), 9);
    auto b = window(100, 130);
    b.force_baseline = true;
    const auto report = backtest::run_backtest(panel, {}, b, Config{}, 1);
    REQUIRE(report.regions.size() == 2);
    for (const auto& r : report.regions) {
        REQUIRE_FALSE(r.targets.empty());
        for (const auto& t : r.targets) {
            CHECK(*t.relative.rmae == 0.0);
            CHECK(*t.relative.rmedian_ae == 0.0);
            CHECK(*t.relative.rwis == 0.0);
            CHECK(*t.relative.rc == 0.0);
        }
    }
}

TEST_CASE("backtest output does not depend on the thread count") {
    const auto panel = synthetic::poisson_panel("T", 4, kStart, 150, synthetic::flat_rate(120), 5);
    const auto b = window(100, 125);
    const auto one = backtest::run_backtest(panel, {}, b, Config{}, 1);
    const auto four = backtest::run_backtest(panel, {}, b, Config{}, 4);
    CHECK(backtest::write_scores_csv(one) == backtest::write_scores_csv(four));
    CHECK(backtest::write_stratification_csv(one) == backtest::write_stratification_csv(four));
    CHECK(one.regions[0].evaluated_origins > 0);
    CHECK(backtest::write_scores_csv(one).rfind("region,metric,method,baseline,relative\n", 0) == 0);
}

TEST_CASE("origins without history are skipped, not fatal") {
    const auto panel = synthetic::poisson_panel("S", 1, kStart, 90, synthetic::flat_rate(60), 1);
    const auto report = backtest::run_backtest(panel, {}, window(0, 80), Config{}, 1);
    CHECK(report.skipped_origins > 0);
    CHECK(report.regions[0].skipped_origins == report.skipped_origins);
}

TEST_CASE("ground truth is matched by date") {
    const auto panel = synthetic::poisson_panel("M", 1, kStart, 150, synthetic::flat_rate(80), 2);
    auto truth = panel;
    const auto self = backtest::run_backtest(panel, {}, window(100, 120), Config{}, 1);
    const auto matched = backtest::run_backtest(panel, truth, window(100, 120), Config{}, 1);
    CHECK(backtest::write_scores_csv(self) == backtest::write_scores_csv(matched));
    for (auto& v : truth[0].values) {
        v = *v + 10.0;
    }
    const auto shifted = backtest::run_backtest(panel, truth, window(100, 120), Config{}, 1);
    CHECK(backtest::write_scores_csv(self) != backtest::write_scores_csv(shifted));
}

TEST_CASE("forecast plot") {
    const auto panel = synthetic::poisson_panel("P", 1, kStart, 140, synthetic::exponential_rate(100, 1.03), 4);
    const auto f = pipeline::run_region_forecast(panel[0], Config{});
    const auto svg = plot::render_forecast_svg(f);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg == plot::render_forecast_svg(f));
}

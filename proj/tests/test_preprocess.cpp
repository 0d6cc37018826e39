#include "covtrend/preprocess.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace covtrend;
using test_support::concat;
using test_support::repeat;
using test_support::series_of;

TEST_CASE("negative report replaced by last week's value times weekly growth") {
    // Days 0..13 report 10, days 14..20 report 14, day 21 reports -5.
    const auto raw = concat(concat(repeat(10, 14), repeat(14, 7)), {-5});
    const auto out = preprocess::fix_negatives(series_of(raw));
    const double estimate = 14.0 * 98.0 / 70.0;   // x[14] * X[20] / X[13]
    const double raw_total = 140.0 + 98.0 - 5.0;
    const double factor = (raw_total - estimate) / 238.0;
    CHECK(out.values[21] == doctest::Approx(estimate).epsilon(1e-12));
    CHECK(out.values[0] == doctest::Approx(10.0 * factor).epsilon(1e-12));
    CHECK(out.values[20] == doctest::Approx(14.0 * factor).epsilon(1e-12));
    CHECK(test_support::sum(out.values) == doctest::Approx(raw_total).epsilon(1e-12));
    CHECK(out.provenance[21] == Provenance::replaced);
    CHECK(out.provenance[3] == Provenance::rescaled);
    CHECK_FALSE(out.degenerate_negative);
}

TEST_CASE("negative report without two weeks of history becomes zero") {
    const auto raw = concat(concat(repeat(10, 7), repeat(14, 6)), {-5});
    const auto out = preprocess::fix_negatives(series_of(raw));
    CHECK(out.degenerate_negative);
    CHECK(out.values[13] == 0.0);
    CHECK(test_support::sum(out.values) == doctest::Approx(149.0).epsilon(1e-12));
    CHECK(out.values[0] == doctest::Approx(10.0 * 149.0 / 154.0).epsilon(1e-12));
}

TEST_CASE("negative after zero history stays zero") {
    auto out = preprocess::fix_negatives(series_of(concat(repeat(0, 14), {-3})));
    CHECK(out.values[14] == 0.0);
    for (int i = 0; i < 14; ++i) {
        CHECK(out.values[static_cast<std::size_t>(i)] == 0.0);
    }
    out = preprocess::fix_negatives(series_of(concat(repeat(0, 20), {-3})));
    CHECK(out.degenerate_growth);
    CHECK(out.values[20] == 0.0);
}

TEST_CASE("positive series pass through unchanged") {
    const std::vector<double> raw{3, 0, 7, 12, 5, 9, 1, 4};
    const auto out = preprocess::fix_negatives(series_of(raw));
    CHECK(out.values == raw);
    for (auto p : out.provenance) {
        CHECK(p == Provenance::observed);
    }
}

TEST_CASE("trailing zeros after a busy week are missing reports") {
    auto clean = preprocess::fix_negatives(series_of(concat(repeat(100, 7), {0})));
    CHECK(preprocess::detect_trailing_missing(clean).forecast_anchor == 6);

    clean = preprocess::fix_negatives(series_of(concat(repeat(0.2, 7), {0})));
    CHECK(preprocess::detect_trailing_missing(clean).forecast_anchor == 7);

    clean = preprocess::fix_negatives(series_of(concat(repeat(100, 7), {5})));
    CHECK(preprocess::detect_trailing_missing(clean).forecast_anchor == 7);

    // Repeated: both trailing zeros dropped, the rate is re-estimated each step.
    clean = preprocess::fix_negatives(series_of(concat(repeat(100, 10), {0, 0})));
    CHECK(preprocess::detect_trailing_missing(clean).forecast_anchor == 9);

    // Threshold: exp(-λ) < 0.01 <=> λ > ln 100 ≈ 4.605
    clean = preprocess::fix_negatives(series_of(concat(repeat(4.6, 7), {0})));
    CHECK(preprocess::detect_trailing_missing(clean).forecast_anchor == 7);
    clean = preprocess::fix_negatives(series_of(concat(repeat(4.61, 7), {0})));
    CHECK(preprocess::detect_trailing_missing(clean).forecast_anchor == 6);
}

TEST_CASE("trailing absent days are never trusted") {
    DailySeries s = series_of({5, 6, 7});
    s.values.emplace_back();
    s.values.emplace_back();
    const auto out = preprocess::preprocess_pipeline(s);
    CHECK(out.forecast_anchor == 2);
    CHECK(out.absent[4] == 1);
}

TEST_CASE("zero runs after a busy week are spread over the run") {
    const auto raw = concat(repeat(70, 7), {0, 0, 90, 70});
    const auto out = preprocess::impute_zero_runs(preprocess::fix_negatives(series_of(raw)));
    CHECK(out.values[7] == 30.0);
    CHECK(out.values[8] == 30.0);
    CHECK(out.values[9] == 30.0);
    CHECK(out.values[10] == 70.0);
    CHECK(out.provenance[8] == Provenance::imputed);
    CHECK(test_support::sum(out.values) == test_support::sum(raw));

    const auto quiet = concat(repeat(0.1, 7), {0, 0.2, 0.1});
    CHECK(preprocess::impute_zero_runs(preprocess::fix_negatives(series_of(quiet))).values == quiet);

    const std::vector<double> no_zeros{4, 5, 6};
    CHECK(preprocess::impute_zero_runs(preprocess::fix_negatives(series_of(no_zeros))).values == no_zeros);

    // A run at the very start has no rate estimate and is left alone.
    const auto leading = concat({0, 0, 9}, repeat(50, 7));
    CHECK(preprocess::impute_zero_runs(preprocess::fix_negatives(series_of(leading))).values == leading);
}

TEST_CASE("min_run_for_imputation skips shorter runs") {
    preprocess::Settings settings;
    settings.min_run_for_imputation = 2;
    const auto raw = concat(repeat(70, 7), {0, 140, 0, 0, 210});
    const auto out = preprocess::impute_zero_runs(preprocess::fix_negatives(series_of(raw)), settings);
    CHECK(out.values[7] == 0.0);
    CHECK(out.values[8] == 140.0);
    CHECK(out.values[9] == 70.0);
    CHECK(out.values[11] == 70.0);
}

TEST_CASE("pipeline examples") {
    const std::vector<double> positive{3, 8, 12, 4, 9, 11, 2, 6};
    auto out = preprocess::preprocess_pipeline(series_of(positive));
    CHECK(out.values == positive);
    CHECK(out.forecast_anchor == positive.size() - 1);

    const auto zeros = repeat(0, 30);
    out = preprocess::preprocess_pipeline(series_of(zeros));
    CHECK(out.values == zeros);
    CHECK(out.forecast_anchor == 29);

    // One negative and one weekend gap.
    auto raw = concat(repeat(50, 21), {-10});
    raw = concat(raw, repeat(50, 5));
    raw = concat(raw, {0, 0, 150, 50});
    out = preprocess::preprocess_pipeline(series_of(raw));
    CHECK(out.provenance[21] == Provenance::replaced);
    CHECK(out.provenance[27] == Provenance::imputed);
    CHECK(out.provenance[29] == Provenance::imputed);
    CHECK(out.forecast_anchor == raw.size() - 1);
}

TEST_CASE("property: preprocessing preserves counts, stays non-negative and is idempotent") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        std::uniform_int_distribution<int> len(20, 150);
        std::uniform_real_distribution<double> level(0.5, 400.0);
        std::bernoulli_distribution zero(0.08);
        std::bernoulli_distribution negative(0.03);
        std::bernoulli_distribution absent(0.03);
        const int n = len(rng);
        std::poisson_distribution<int> count(level(rng));
        DailySeries s = series_of({});
        double cumulative = 0.0;
        for (int t = 0; t < n; ++t) {
            if (absent(rng)) {
                s.values.emplace_back();
                continue;
            }
            double v = zero(rng) ? 0.0 : count(rng);
            if (negative(rng) && cumulative > 0.0) {
                v = -std::floor(std::uniform_real_distribution<double>(0.0, 1.0)(rng) * cumulative * 0.2);
            }
            cumulative += v;
            s.values.emplace_back(v);
        }
        const auto out = preprocess::preprocess_pipeline(s);
        const auto dense = s.dense();
        double raw_total = 0.0;
        double clean_total = 0.0;
        for (std::size_t i = 0; i <= out.forecast_anchor; ++i) {
            raw_total += dense[i];
            clean_total += out.values[i];
        }
        CHECK(clean_total == doctest::Approx(raw_total).epsilon(1e-9));
        for (double v : out.values) {
            CHECK(v >= 0.0);
            CHECK(std::isfinite(v));
        }
        CHECK(out.forecast_anchor < out.size());
        const auto twice = preprocess::preprocess_pipeline(out.to_daily());
        CHECK(twice.values == out.values);
        CHECK(twice.forecast_anchor == out.forecast_anchor);
    }
}

#include "covtrend/error.hpp"
#include "covtrend/evaluation.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace covtrend;
using evaluation::OriginRecord;

namespace {

QuantileForecast constant_forecast(double c) {
    QuantileForecast f{Target::weekly(1), {}, c};
    f.quantiles.fill(c);
    return f;
}

QuantileForecast ramp_forecast() {
    QuantileForecast f{Target::weekly(1), {}, 110.0};
    for (std::size_t i = 0; i < 23; ++i) {
        f.quantiles[i] = 100.0 + 10.0 * kQuantileLevels[i] * 2.0;
    }
    return f;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double normal_quantile(double p) {
    double lo = -10.0;
    double hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (normal_cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// The score written out term by term, kept independent of the library loop.
double wis_oracle(const QuantileForecast& f, double xi) {
    double s = std::abs(xi - f.quantiles[11]);
    for (std::size_t k = 0; k < 11; ++k) {
        const double a = kQuantileLevels[k];
        const double l = f.quantiles[k];
        const double u = f.quantiles[22 - k];
        double is = u - l;
        if (xi < l) is += (2.0 / (2.0 * a)) * (l - xi);
        if (xi > u) is += (2.0 / (2.0 * a)) * (xi - u);
        s += a * is;
    }
    return s;
}

} // namespace

TEST_CASE("absolute error") {
    CHECK(evaluation::absolute_error(100, 110) == 10.0);
    CHECK(evaluation::absolute_error(42.5, 42.5) == 0.0);
    CHECK(evaluation::absolute_error(0, 70) == 70.0);
}

TEST_CASE("interval score") {
    CHECK(evaluation::interval_score(10, 20, 0.2, 15) == 10.0);
    CHECK(evaluation::interval_score(10, 20, 0.2, 25) == 60.0);
    CHECK(evaluation::interval_score(10, 20, 0.5, 8) == 18.0);
    CHECK_THROWS_AS(evaluation::interval_score(20, 10, 0.5, 8), ContractError);
    CHECK_THROWS_AS(evaluation::interval_score(10, 20, 1.0, 8), ContractError);
}

TEST_CASE("interval score is continuous and piecewise linear") {
    const double eps = 1e-7;
    for (double edge : {10.0, 20.0}) {
        const double a = evaluation::interval_score(10, 20, 0.1, edge - eps);
        const double b = evaluation::interval_score(10, 20, 0.1, edge + eps);
        CHECK(std::abs(a - b) < 1e-4);
    }
    const double s1 = evaluation::interval_score(10, 20, 0.1, 30);
    const double s2 = evaluation::interval_score(10, 20, 0.1, 31);
    CHECK(s2 - s1 == doctest::Approx(20.0));
}

TEST_CASE("weighted interval score") {
    CHECK(evaluation::wis(constant_forecast(50), 50) == 0.0);
    for (double d : {0.5, 3.0, 40.0}) {
        CHECK(evaluation::wis(constant_forecast(50), 50 + d) == doctest::Approx(12.0 * d));
        CHECK(evaluation::wis(constant_forecast(50), 50 - d) == doctest::Approx(12.0 * d));
    }
    const auto f = ramp_forecast();
    double sharp = 0.0;
    for (std::size_t k = 0; k < 11; ++k) {
        sharp += kQuantileLevels[k] * (f.quantiles[22 - k] - f.quantiles[k]);
    }
    CHECK(evaluation::wis(f, f.quantiles[11]) == doctest::Approx(sharp));
    for (double xi : {0.0, 99.0, 103.3, 110.0, 118.0, 125.0}) {
        CHECK(evaluation::wis(f, xi) == doctest::Approx(wis_oracle(f, xi)));
        CHECK(evaluation::wis(f, xi, true) == doctest::Approx(wis_oracle(f, xi) / 11.5));
    }
    auto broken = f;
    std::swap(broken.quantiles[3], broken.quantiles[4]);
    CHECK_THROWS_AS(evaluation::wis(broken, 1.0), IntegrityError);
}

TEST_CASE("total coverage") {
    const auto f = ramp_forecast();
    CHECK(evaluation::total_coverage(f, 0.0) == 0);
    CHECK(evaluation::total_coverage(f, f.quantiles[11]) == 11);
    // q(0.30) sits at index 6; intervals k = 0..6 have q_k <= it and reach above.
    int expected = 0;
    const double xi = f.quantiles[6];
    for (std::size_t k = 0; k < 11; ++k) {
        if (f.quantiles[k] <= xi && xi <= f.quantiles[22 - k]) {
            ++expected;
        }
    }
    CHECK(expected == 7);
    CHECK(evaluation::total_coverage(f, xi) == 7);
}

TEST_CASE("property: coverage falls away from the median") {
    const auto f = ramp_forecast();
    int prev = 11;
    for (double xi = f.quantiles[11]; xi < 130.0; xi += 0.05) {
        const int c = evaluation::total_coverage(f, xi);
        CHECK(c <= prev);
        prev = c;
    }
    prev = 11;
    for (double xi = f.quantiles[11]; xi > 90.0; xi -= 0.05) {
        const int c = evaluation::total_coverage(f, xi);
        CHECK(c <= prev);
        prev = c;
    }
}

TEST_CASE("property: wis is non-negative and zero only at a degenerate hit") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (int trial = 0; trial < 500; ++trial) {
        QuantileForecast f{Target::weekly(1), {}, 0.0};
        for (auto& q : f.quantiles) {
            q = u(rng);
        }
        std::sort(f.quantiles.begin(), f.quantiles.end());
        f.point = f.quantiles[11];
        const double xi = u(rng);
        CHECK(evaluation::wis(f, xi) > 0.0);
    }
}

TEST_CASE("aggregation and relative scores") {
    std::vector<OriginRecord> single{{3.0, 4.0, 5}};
    auto s = evaluation::aggregate_scores(single);
    CHECK(s.mae == 3.0);
    CHECK(s.median_ae == 3.0);
    CHECK(s.mwis == 4.0);
    CHECK(s.mean_total_coverage == 5.0);
    CHECK(s.n_origins == 1);

    std::vector<OriginRecord> three{{1, 0, 0}, {2, 0, 0}, {9, 0, 0}};
    s = evaluation::aggregate_scores(three);
    CHECK(s.mae == 4.0);
    CHECK(s.median_ae == 2.0);
    CHECK_THROWS_AS(evaluation::aggregate_scores(std::vector<OriginRecord>{}), ContractError);

    evaluation::ScoreSet b{10.0, 8.0, 6.0, 5.0, 4};
    evaluation::ScoreSet m{7.5, 8.0, 6.0, 6.0, 4};
    auto r = evaluation::relative_scores(m, b);
    CHECK(*r.rmae == doctest::Approx(0.25));
    CHECK(*r.rmedian_ae == 0.0);
    CHECK(*r.rc == doctest::Approx(0.2));
    r = evaluation::relative_scores(b, b);
    CHECK(*r.rmae == 0.0);
    CHECK(*r.rwis == 0.0);
    CHECK(*r.rc == 0.0);

    evaluation::ScoreSet zero{0.0, 0.0, 0.0, 0.0, 4};
    r = evaluation::relative_scores(m, zero);
    CHECK_FALSE(r.rmae.has_value());
    CHECK_FALSE(r.rwis.has_value());
    CHECK_FALSE(r.rc.has_value());
}

TEST_CASE("growth rates from a spline on weekly totals") {
    std::vector<double> flat(140, 10.0);
    std::vector<int> origins;
    for (int t = 21; t < 120; t += 5) {
        origins.push_back(t);
    }
    for (const auto& g : evaluation::growth_rates(flat, origins)) {
        REQUIRE(g.has_value());
        CHECK(std::abs(*g) < 1e-6);
    }

    std::vector<double> growing;
    for (int w = 0; w < 20; ++w) {
        for (int d = 0; d < 7; ++d) {
            growing.push_back(100.0 * std::pow(1.05, w) / 7.0);
        }
    }
    for (const auto& g : evaluation::growth_rates(growing, origins)) {
        REQUIRE(g.has_value());
        CHECK(std::abs(*g - std::log(1.05)) <= 0.2 * std::log(1.05));
    }

    const std::vector<int> outside{-30, 500};
    for (const auto& g : evaluation::growth_rates(flat, outside)) {
        CHECK_FALSE(g.has_value());
    }
    CHECK_THROWS_AS(evaluation::growth_rates(std::vector<double>(50, 1.0), origins), ContractError);
}

TEST_CASE("stratification buckets") {
    std::vector<evaluation::GrowthSample> samples{
        {0.001, 0.1, 0.2}, {0.004, 0.3, 0.4}, {0.009, 0.5, 0.6}, {0.03, 1.0, 2.0}, {-0.015, 0.7, 0.9}};
    const auto rows = evaluation::growth_rate_stratification(samples);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].bucket_lo == doctest::Approx(-0.02));
    CHECK(rows[0].count == 1);
    CHECK(rows[1].bucket_lo == doctest::Approx(0.0));
    CHECK(rows[1].count == 3);
    CHECK(rows[1].method_median == doctest::Approx(0.3));
    CHECK(rows[1].method_q25 == doctest::Approx(0.2));
    CHECK(rows[1].baseline_q75 == doctest::Approx(0.5));
    CHECK(rows[2].bucket_lo == doctest::Approx(0.03));
    CHECK(rows[2].bucket_hi == doctest::Approx(0.04));
    CHECK(evaluation::growth_rate_stratification({}).empty());
}

TEST_CASE("properness of wis by simulation") {
    const double mu = 10.0;
    const double sigma = 2.0;
    QuantileForecast truth{Target::weekly(1), {}, mu};
    for (std::size_t i = 0; i < 23; ++i) {
        truth.quantiles[i] = mu + sigma * normal_quantile(kQuantileLevels[i]);
    }
    std::vector<QuantileForecast> perturbed;
    for (int j = 0; j < 20; ++j) {
        auto f = truth;
        const double shift = (j % 2 ? 1.0 : -1.0) * 0.1 * (1 + j / 4);
        const double scale = 1.0 + ((j / 2) % 2 ? 0.15 : -0.15) * (1 + j % 3) / 3.0;
        for (std::size_t i = 0; i < 23; ++i) {
            f.quantiles[i] = mu + shift + scale * (truth.quantiles[i] - mu);
        }
        f.point = f.quantiles[11];
        perturbed.push_back(f);
    }
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> draw(mu, sigma);
    std::vector<double> xs(10000);
    for (auto& x : xs) {
        x = draw(rng);
    }
    for (const auto& f : perturbed) {
        double sum = 0.0;
        double sum_sq = 0.0;
        for (double x : xs) {
            const double d = evaluation::wis(truth, x) - evaluation::wis(f, x);
            sum += d;
            sum_sq += d * d;
        }
        const double n = static_cast<double>(xs.size());
        const double mean = sum / n;
        const double se = std::sqrt((sum_sq / n - mean * mean) / n);
        CHECK(mean <= 3.0 * se);
    }
}

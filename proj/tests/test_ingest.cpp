#include "covtrend/csv.hpp"
#include "covtrend/error.hpp"
#include "covtrend/ingest.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <random>
#include <string>

using namespace covtrend;

namespace {

const std::string kJhuHeader = "Province/State,Country/Region,Lat,Long,1/22/20,1/23/20,1/24/20,1/25/20\n";

QuantileForecast flat_forecast(Target target, double value) {
    QuantileForecast f;
    f.target = target;
    f.quantiles.fill(value);
    f.point = value;
    return f;
}

QuantileForecast spread_forecast(Target target, double point) {
    QuantileForecast f;
    f.target = target;
    for (std::size_t i = 0; i < kQuantileLevels.size(); ++i) {
        f.quantiles[i] = point + (static_cast<double>(i) - 11.0) * 3.25;
    }
    f.point = point;
    return f;
}

} // namespace

TEST_CASE("JHU wide rows become daily differences") {
    const auto series = ingest::parse_jhu_wide(kJhuHeader + ",Aland,0,0,0,3,3,10\nKansas,US,1,2,5,5,2,2\n",
                                               SeriesKind::cases);
    REQUIRE(series.size() == 2);
    CHECK(series[0].region.label() == "Aland");
    CHECK(series[0].dense() == std::vector<double>{0, 3, 0, 7});
    CHECK(series[1].region.label() == "US/Kansas");
    CHECK(series[1].dense() == std::vector<double>{5, 0, -3, 0});
    CHECK(series[0].start_date.iso() == "2020-01-22");
    for (const auto& v : series[0].values) {
        CHECK(v.has_value());
    }
}

TEST_CASE("JHU wide errors") {
    CHECK(ingest::parse_jhu_wide(kJhuHeader, SeriesKind::cases).empty());
    CHECK_THROWS_AS(ingest::parse_jhu_wide("Country,Lat,Long,1/22/20\nA,0,0,1\n", SeriesKind::cases), FormatError);
    CHECK_THROWS_AS(ingest::parse_jhu_wide("Province/State,Country/Region,Lat,Long,1/22/20,bad\n", SeriesKind::cases),
                    FormatError);
    try {
        ingest::parse_jhu_wide(kJhuHeader + ",A,0,0,1,2,3,4\n,B,0,0,1,x,3,4\n", SeriesKind::cases);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.row() == 2);
    }
}

TEST_CASE("JHU daily values sum to the last cumulative value") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> step(0, 50);
    for (int trial = 0; trial < 50; ++trial) {
        std::string text = "Province/State,Country/Region,Lat,Long";
        const int days = 30;
        for (int d = 0; d < days; ++d) {
            const auto iso = (Date::from_ymd(2020, 3, 1) + d).iso();
            text += "," + std::to_string(std::stoi(iso.substr(5, 2))) + "/" + std::to_string(std::stoi(iso.substr(8, 2))) +
                    "/20";
        }
        text += "\n,R,0,0";
        int cumulative = 0;
        for (int d = 0; d < days; ++d) {
            cumulative += step(rng);
            text += "," + std::to_string(cumulative);
        }
        text += "\n";
        const auto s = ingest::parse_jhu_wide(text, SeriesKind::deaths);
        REQUIRE(s.size() == 1);
        CHECK(test_support::sum(s[0].dense()) == cumulative);
        CHECK(s[0].kind == SeriesKind::deaths);
    }
}

TEST_CASE("long format materializes gaps and sorts") {
    const auto series =
        ingest::parse_long("region,date,value\nB,2020-04-02,1\nA,2020-04-03,7\nA,2020-04-01,5\nB,2020-04-01,-2\n");
    REQUIRE(series.size() == 2);
    CHECK(series[0].region.label() == "A");
    REQUIRE(series[0].size() == 3);
    CHECK(*series[0].values[0] == 5);
    CHECK_FALSE(series[0].values[1].has_value());
    CHECK(*series[0].values[2] == 7);
    CHECK(*series[1].values[0] == -2);
    CHECK(series[1].start_date.iso() == "2020-04-01");
}

TEST_CASE("long format errors") {
    CHECK_THROWS_AS(ingest::parse_long("region,date,value\nA,2020-04-01,1\nA,2020-04-01,2\n"), ConflictError);
    CHECK_THROWS_AS(ingest::parse_long("region,date,value\nA,2020-13-01,1\n"), ParseError);
    CHECK_THROWS_AS(ingest::parse_long("region,day,value\n"), FormatError);
    CHECK_THROWS_AS(ingest::parse_long("region,date,value\nA,2020-04-01,x\n"), ParseError);
}

TEST_CASE("long format round trip is lossless") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> value(-5.0, 5000.0);
    std::bernoulli_distribution absent(0.1);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<DailySeries> input;
        for (const char* name : {"Alpha", "Beta/West"}) {
            DailySeries s;
            s.region = RegionKey::from_label(name);
            s.start_date = Date::from_ymd(2020, 2, 1) + trial;
            for (int d = 0; d < 40; ++d) {
                if (d > 0 && d < 39 && absent(rng)) {
                    s.values.emplace_back();
                } else {
                    s.values.emplace_back(value(rng));
                }
            }
            input.push_back(s);
        }
        const auto text = ingest::write_long(input);
        const auto back = ingest::parse_long(text);
        REQUIRE(back.size() == input.size());
        for (std::size_t i = 0; i < input.size(); ++i) {
            CHECK(back[i].region == input[i].region);
            CHECK(back[i].start_date == input[i].start_date);
            CHECK(back[i].values == input[i].values);
        }
        CHECK(ingest::write_long(back) == text);
    }
}

TEST_CASE("hub output row counts and layout") {
    std::vector<ingest::HubForecast> one{{"A", SeriesKind::cases, spread_forecast(Target::weekly(1), 500)}};
    const auto text = ingest::write_hub_quantiles(one, Date::from_ymd(2021, 3, 12));
    const auto rows = csv::parse(text);
    CHECK(rows.size() == 1 + 24);
    CHECK(rows[1] == csv::Row{"2021-03-12", "1 wk ahead inc case", "2021-03-19", "A", "point", "", "500.0000"});
    CHECK(rows[2][5] == "0.01");
    CHECK(rows[24][5] == "0.99");

    std::vector<ingest::HubForecast> four;
    for (const char* loc : {"B", "A"}) {
        for (int k : {2, 1}) {
            four.push_back({loc, SeriesKind::deaths, spread_forecast(Target::weekly(k), 100.0 * k)});
        }
    }
    const auto rows4 = csv::parse(ingest::write_hub_quantiles(four, Date::from_ymd(2021, 3, 12)));
    CHECK(rows4.size() == 1 + 96);
    CHECK(rows4[1][3] == "A");
    CHECK(rows4[1][1] == "1 wk ahead inc death");
    CHECK(rows4[25][1] == "2 wk ahead inc death");
    CHECK(rows4[25][2] == "2021-03-26");
    CHECK(rows4[49][3] == "B");
}

TEST_CASE("hub output refuses broken forecasts") {
    auto negative = flat_forecast(Target::weekly(1), 10);
    negative.quantiles[0] = -1;
    std::vector<ingest::HubForecast> a{{"A", SeriesKind::cases, negative}};
    CHECK_THROWS_AS(ingest::write_hub_quantiles(a, Date::from_ymd(2021, 1, 1)), IntegrityError);

    auto crossing = spread_forecast(Target::weekly(1), 100);
    std::swap(crossing.quantiles[3], crossing.quantiles[4]);
    std::vector<ingest::HubForecast> b{{"A", SeriesKind::cases, crossing}};
    CHECK_THROWS_AS(ingest::write_hub_quantiles(b, Date::from_ymd(2021, 1, 1)), IntegrityError);

    auto off_median = spread_forecast(Target::weekly(1), 100);
    off_median.point = 101;
    std::vector<ingest::HubForecast> c{{"A", SeriesKind::cases, off_median}};
    CHECK_THROWS_AS(ingest::write_hub_quantiles(c, Date::from_ymd(2021, 1, 1)), IntegrityError);
}

TEST_CASE("hub output parses back to the 23 levels") {
    std::vector<ingest::HubForecast> fs{{"US/Kansas", SeriesKind::cases, spread_forecast(Target::weekly(2), 812.5)},
                                        {"Spain", SeriesKind::cases, spread_forecast(Target::weekly(1), 40)}};
    const auto entries = ingest::parse_hub_quantiles(ingest::write_hub_quantiles(fs, Date::from_ymd(2020, 9, 10)));
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].forecast.location == "Spain");
    CHECK(entries[1].forecast.location == "US/Kansas");
    CHECK(entries[1].forecast.forecast.target == Target::weekly(2));
    CHECK(entries[1].target_end_date.iso() == "2020-09-24");
    for (std::size_t i = 0; i < kQuantileLevels.size(); ++i) {
        CHECK(entries[1].forecast.forecast.quantiles[i] == fs[0].forecast.quantiles[i]);
    }
    CHECK(entries[1].forecast.forecast.point == 812.5);
}

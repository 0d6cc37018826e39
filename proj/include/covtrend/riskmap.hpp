#pragma once

#include "covtrend/series.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace covtrend::riskmap {

enum class Color { green, orange, red, grey };

std::string_view to_string(Color color);

struct Thresholds {
    double min_tests_per_million = 10'000.0;
    double incidence_per_100k = 30.0;
    double r_eff = 0.9;
};

struct RiskInput {
    RegionKey region;                         // population must be present
    double forecast_weekly_cases = 0.0;       // counts per week
    std::optional<double> r_eff;
    std::optional<double> tests_per_million;  // falls back to region.tests_per_million
};

struct RiskResult {
    Color color = Color::grey;
    std::optional<double> incidence;   // weekly cases per 100K
    bool missing_population = false;
    bool missing_r_eff = false;        // high incidence without R-eff: classified red
};

/// Grey without adequate testing data; otherwise green below the incidence threshold,
/// orange when R-eff is below its threshold, red at or above it (or when it is unknown).
RiskResult classify(const RiskInput& input, const Thresholds& thresholds = {});

struct RiskRow {
    std::string region;
    RiskResult result;
    std::optional<double> r_eff;
};

/// `region,date,r_eff`; keeps the latest value dated on or before `as_of` per region.
std::map<std::string, double> parse_reff_csv(std::string_view text, Date as_of);
/// `region,tests_per_million`.
std::map<std::string, double> parse_tests_csv(std::string_view text);
/// `region,population`.
std::map<std::string, std::int64_t> parse_population_csv(std::string_view text);
/// `region,color,incidence,r_eff`; blank cells for missing values.
std::string write_riskmap_csv(std::span<const RiskRow> rows);

} // namespace covtrend::riskmap

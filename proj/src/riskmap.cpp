#include "covtrend/riskmap.hpp"

#include "covtrend/csv.hpp"
#include "covtrend/error.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace covtrend::riskmap {

std::string_view to_string(Color color) {
    switch (color) {
    case Color::green: return "green";
    case Color::orange: return "orange";
    case Color::red: return "red";
    case Color::grey: return "grey";
    }
    return "grey";
}

RiskResult classify(const RiskInput& input, const Thresholds& thresholds) {
    if (!(input.forecast_weekly_cases >= 0.0) || !std::isfinite(input.forecast_weekly_cases)) {
        throw ContractError("weekly case forecast must be finite and non-negative");
    }
    RiskResult out;
    const auto tests = input.tests_per_million ? input.tests_per_million : input.region.tests_per_million;
    if (!input.region.population || *input.region.population <= 0) {
        out.missing_population = true;
        return out;
    }
    out.incidence = 100'000.0 * input.forecast_weekly_cases / static_cast<double>(*input.region.population);
    if (!tests || *tests < thresholds.min_tests_per_million) {
        return out;
    }
    if (*out.incidence < thresholds.incidence_per_100k) {
        out.color = Color::green;
    } else if (!input.r_eff) {
        out.missing_r_eff = true;
        out.color = Color::red;
    } else {
        out.color = *input.r_eff < thresholds.r_eff ? Color::orange : Color::red;
    }
    return out;
}

namespace {

std::vector<std::vector<std::string>> table(std::string_view text, const std::vector<std::string>& header) {
    auto rows = csv::parse(text);
    if (rows.empty() || rows.front() != header) {
        std::string expected;
        for (const auto& h : header) {
            expected += (expected.empty() ? "" : ",") + h;
        }
        throw FormatError("expected header " + expected);
    }
    rows.erase(rows.begin());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != header.size()) {
            throw ParseError(i + 2, "expected " + std::to_string(header.size()) + " fields");
        }
    }
    return rows;
}

double number(const std::string& cell, std::size_t row) {
    double v = 0.0;
    if (!csv::parse_double(cell, v)) {
        throw ParseError(row, "not a number: '" + cell + "'");
    }
    return v;
}

} // namespace

std::map<std::string, double> parse_reff_csv(std::string_view text, Date as_of) {
    std::map<std::string, std::pair<Date, double>> latest;
    const auto rows = table(text, {"region", "date", "r_eff"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][2].empty()) {
            continue;
        }
        Date d;
        try {
            d = Date::parse_iso(rows[i][1]);
        } catch (const Error& e) {
            throw ParseError(i + 2, e.what());
        }
        const double v = number(rows[i][2], i + 2);
        if (as_of < d) {
            continue;
        }
        auto it = latest.find(rows[i][0]);
        if (it == latest.end() || it->second.first < d) {
            latest[rows[i][0]] = {d, v};
        }
    }
    std::map<std::string, double> out;
    for (const auto& [region, entry] : latest) {
        out[region] = entry.second;
    }
    return out;
}

std::map<std::string, double> parse_tests_csv(std::string_view text) {
    std::map<std::string, double> out;
    const auto rows = table(text, {"region", "tests_per_million"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double v = number(rows[i][1], i + 2);
        if (v < 0.0) {
            throw ParseError(i + 2, "negative testing rate");
        }
        out[rows[i][0]] = v;
    }
    return out;
}

std::map<std::string, std::int64_t> parse_population_csv(std::string_view text) {
    std::map<std::string, std::int64_t> out;
    const auto rows = table(text, {"region", "population"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double v = number(rows[i][1], i + 2);
        if (!(v > 0.0) || v != std::floor(v)) {
            throw ParseError(i + 2, "population must be a positive integer");
        }
        out[rows[i][0]] = static_cast<std::int64_t>(v);
    }
    return out;
}

std::string write_riskmap_csv(std::span<const RiskRow> rows) {
    std::string out = "region,color,incidence,r_eff\n";
    for (const auto& r : rows) {
        out += csv::escape(r.region) + "," + std::string(to_string(r.result.color)) + "," +
               (r.result.incidence ? csv::format_fixed(*r.result.incidence, 2) : std::string()) + "," +
               (r.r_eff ? csv::format_shortest(*r.r_eff) : std::string()) + "\n";
    }
    return out;
}

} // namespace covtrend::riskmap

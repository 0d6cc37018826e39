#include "covtrend/ingest.hpp"

#include "covtrend/csv.hpp"
#include "covtrend/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

namespace covtrend::ingest {

namespace {

constexpr std::string_view kHubHeader = "forecast_date,target,target_end_date,location,type,quantile,value";

std::string first_line(std::string_view text) {
    const auto end = text.find('\n');
    std::string line(text.substr(0, end));
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
    }
    return line;
}

std::string_view strip_bom(std::string_view text) {
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") {
        text.remove_prefix(3);
    }
    return text;
}

} // namespace

bool looks_like_jhu(std::string_view csv_text) {
    return first_line(csv_text).rfind("Province/State,Country/Region", 0) == 0;
}

std::vector<DailySeries> parse_jhu_wide(std::string_view csv_text, SeriesKind kind) {
    const auto rows = csv::parse(strip_bom(csv_text));
    if (rows.empty()) {
        throw FormatError("JHU file is empty");
    }
    const auto& header = rows.front();
    if (header.size() < 4 || header[0] != "Province/State" || header[1] != "Country/Region" || header[2] != "Lat" ||
        (header[3] != "Long" && header[3] != "Long_")) {
        throw FormatError("JHU header must start with Province/State,Country/Region,Lat,Long");
    }
    std::vector<Date> dates;
    for (std::size_t c = 4; c < header.size(); ++c) {
        dates.push_back(Date::parse_us_short(header[c]));
        if (dates.size() > 1 && dates.back() - dates[dates.size() - 2] != 1) {
            throw FormatError("JHU date columns are not consecutive at '" + header[c] + "'");
        }
    }
    if (dates.empty()) {
        throw FormatError("JHU header has no date columns");
    }

    std::vector<DailySeries> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size()) {
            throw ParseError(r, "expected " + std::to_string(header.size()) + " fields, found " +
                                    std::to_string(row.size()));
        }
        DailySeries s;
        s.kind = kind;
        s.start_date = dates.front();
        s.region.country = row[1];
        if (!row[0].empty()) {
            s.region.subregion = row[0];
        }
        if (s.region.country.empty()) {
            throw ParseError(r, "empty Country/Region");
        }
        s.values.reserve(dates.size());
        double previous = 0.0;
        for (std::size_t c = 4; c < row.size(); ++c) {
            double cumulative = 0.0;
            if (!csv::parse_double(row[c], cumulative)) {
                throw ParseError(r, "non-numeric cell '" + row[c] + "' in column " + header[c]);
            }
            s.values.emplace_back(cumulative - previous);
            previous = cumulative;
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<DailySeries> parse_long(std::string_view csv_text, SeriesKind kind) {
    const auto rows = csv::parse(strip_bom(csv_text));
    if (rows.empty() || rows.front().size() < 3 || rows.front()[0] != "region" || rows.front()[1] != "date" ||
        rows.front()[2] != "value") {
        throw FormatError("long-format header must be region,date,value");
    }
    std::map<std::string, std::map<Date, std::optional<double>>> by_region;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() < 3) {
            throw ParseError(r, "expected region,date,value");
        }
        if (row[0].empty()) {
            throw ParseError(r, "empty region");
        }
        Date date;
        try {
            date = Date::parse_iso(row[1]);
        } catch (const FormatError& e) {
            throw ParseError(r, e.what());
        }
        std::optional<double> value;
        if (!row[2].empty()) {
            double v = 0.0;
            if (!csv::parse_double(row[2], v)) {
                throw ParseError(r, "non-numeric value '" + row[2] + "'");
            }
            value = v;
        }
        auto [it, inserted] = by_region[row[0]].emplace(date, value);
        if (!inserted) {
            throw ConflictError("duplicate row for region " + row[0] + " on " + date.iso());
        }
    }
    std::vector<DailySeries> out;
    for (const auto& [label, days] : by_region) {
        DailySeries s;
        s.region = RegionKey::from_label(label);
        s.kind = kind;
        s.start_date = days.begin()->first;
        s.values.assign(static_cast<std::size_t>(days.rbegin()->first - s.start_date) + 1, std::nullopt);
        for (const auto& [date, value] : days) {
            s.values[static_cast<std::size_t>(date - s.start_date)] = value;
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::string write_long(std::span<const DailySeries> series) {
    std::string out = "region,date,value\n";
    for (const auto& s : series) {
        const auto label = s.region.label();
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            out += csv::join({label, s.date_at(i).iso(), s.values[i] ? csv::format_shortest(*s.values[i]) : ""});
        }
    }
    return out;
}

std::string hub_target_name(const Target& target, SeriesKind kind) {
    const char* unit = target.kind == Target::Kind::weekly_total ? " wk ahead inc " : " day ahead inc ";
    return std::to_string(target.step) + unit + (kind == SeriesKind::cases ? "case" : "death");
}

std::string write_hub_quantiles(std::span<const HubForecast> forecasts, Date origin_date) {
    struct Line {
        std::string location;
        std::string target;
        int quantile_rank;   // -1 for the point row
        std::string text;
    };
    std::vector<Line> lines;
    lines.reserve(forecasts.size() * 24);
    for (const auto& f : forecasts) {
        f.forecast.check_invariants();
        const auto target = hub_target_name(f.forecast.target, f.kind);
        const auto end_date = (origin_date + f.forecast.target.end_offset_days()).iso();
        lines.push_back({f.location, target, -1,
                         csv::join({origin_date.iso(), target, end_date, f.location, "point", "",
                                    csv::format_fixed(f.forecast.point, 4)})});
        for (std::size_t i = 0; i < kQuantileLevels.size(); ++i) {
            lines.push_back({f.location, target, static_cast<int>(i),
                             csv::join({origin_date.iso(), target, end_date, f.location, "quantile",
                                        csv::format_shortest(kQuantileLevels[i]),
                                        csv::format_fixed(f.forecast.quantiles[i], 4)})});
        }
    }
    std::stable_sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
        return std::tie(a.location, a.target, a.quantile_rank) < std::tie(b.location, b.target, b.quantile_rank);
    });
    std::string out(kHubHeader);
    out.push_back('\n');
    for (const auto& l : lines) {
        out += l.text;
    }
    return out;
}

std::vector<HubEntry> parse_hub_quantiles(std::string_view csv_text) {
    const auto rows = csv::parse(strip_bom(csv_text));
    if (rows.empty() || csv::join(rows.front()) != std::string(kHubHeader) + "\n") {
        throw FormatError("hub header must be " + std::string(kHubHeader));
    }
    struct Partial {
        HubEntry entry;
        std::array<bool, 23> seen{};
        bool has_point = false;
    };
    std::map<std::pair<std::string, std::string>, Partial> groups;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 7) {
            throw ParseError(r, "expected 7 fields");
        }
        auto& p = groups[{row[3], row[1]}];
        try {
            p.entry.forecast_date = Date::parse_iso(row[0]);
            p.entry.target_end_date = Date::parse_iso(row[2]);
        } catch (const FormatError& e) {
            throw ParseError(r, e.what());
        }
        // "<n> wk ahead inc case" / "<n> day ahead inc death"
        int step = 0;
        char unit[8] = {};
        char what[8] = {};
        if (std::sscanf(row[1].c_str(), "%d %7s ahead inc %7s", &step, unit, what) != 3 || step < 1) {
            throw ParseError(r, "unrecognised target '" + row[1] + "'");
        }
        const std::string unit_s(unit);
        if (unit_s != "wk" && unit_s != "day") {
            throw ParseError(r, "unrecognised target unit '" + unit_s + "'");
        }
        p.entry.forecast.location = row[3];
        p.entry.forecast.kind = parse_series_kind(what);
        p.entry.forecast.forecast.target = unit_s == "wk" ? Target::weekly(step) : Target::daily(step);
        double value = 0.0;
        if (!csv::parse_double(row[6], value)) {
            throw ParseError(r, "non-numeric value '" + row[6] + "'");
        }
        if (row[4] == "point") {
            p.entry.forecast.forecast.point = value;
            p.has_point = true;
            continue;
        }
        if (row[4] != "quantile") {
            throw ParseError(r, "type must be point or quantile");
        }
        double level = 0.0;
        if (!csv::parse_double(row[5], level)) {
            throw ParseError(r, "bad quantile level '" + row[5] + "'");
        }
        const auto it = std::find(kQuantileLevels.begin(), kQuantileLevels.end(), level);
        if (it == kQuantileLevels.end()) {
            throw ParseError(r, "quantile level " + row[5] + " is not one of the 23 hub levels");
        }
        const auto idx = static_cast<std::size_t>(it - kQuantileLevels.begin());
        p.entry.forecast.forecast.quantiles[idx] = value;
        p.seen[idx] = true;
    }
    std::vector<HubEntry> out;
    for (auto& [key, p] : groups) {
        if (!std::all_of(p.seen.begin(), p.seen.end(), [](bool b) { return b; })) {
            throw IntegrityError("forecast " + key.first + " / " + key.second + " lacks some quantile levels");
        }
        if (!p.has_point) {
            p.entry.forecast.forecast.point = p.entry.forecast.forecast.median();
        }
        out.push_back(std::move(p.entry));
    }
    return out;
}

} // namespace covtrend::ingest

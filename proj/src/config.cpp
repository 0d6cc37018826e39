#include "covtrend/config.hpp"

#include "covtrend/csv.hpp"
#include "covtrend/error.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <utility>
#include <vector>

namespace covtrend {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

int to_int(std::string_view key, std::string_view v) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
        throw ContractError("config key '" + std::string(key) + "' expects an integer, got '" + std::string(v) + "'");
    }
    return out;
}

double to_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    if (!csv::parse_double(v, out)) {
        throw ContractError("config key '" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
    }
    return out;
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1") {
        return true;
    }
    if (v == "false" || v == "0") {
        return false;
    }
    throw ContractError("config key '" + std::string(key) + "' expects true or false");
}

struct Field {
    const char* key;
    std::function<void(Config&, std::string_view)> set;
    std::function<std::string(const Config&)> get;
};

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        {"p_zero_threshold", [](Config& c, std::string_view v) { c.preprocess.p_zero_threshold = to_double("p_zero_threshold", v); },
         [](const Config& c) { return csv::format_shortest(c.preprocess.p_zero_threshold); }},
        {"min_run_for_imputation", [](Config& c, std::string_view v) { c.preprocess.min_run_for_imputation = to_int("min_run_for_imputation", v); },
         [](const Config& c) { return std::to_string(c.preprocess.min_run_for_imputation); }},
        {"min_history_for_negative", [](Config& c, std::string_view v) { c.preprocess.min_history_for_negative = to_int("min_history_for_negative", v); },
         [](const Config& c) { return std::to_string(c.preprocess.min_history_for_negative); }},
        {"L", [](Config& c, std::string_view v) { c.trend.window_length = to_int("L", v); },
         [](const Config& c) { return std::to_string(c.trend.window_length); }},
        {"outlier_weight_threshold", [](Config& c, std::string_view v) { c.trend.outlier_weight_threshold = to_double("outlier_weight_threshold", v); },
         [](const Config& c) { return csv::format_shortest(c.trend.outlier_weight_threshold); }},
        {"period", [](Config& c, std::string_view v) { c.trend.period = to_int("period", v); },
         [](const Config& c) { return std::to_string(c.trend.period); }},
        {"seasonal_span", [](Config& c, std::string_view v) { c.trend.stl.seasonal_span = to_int("seasonal_span", v); },
         [](const Config& c) { return std::to_string(c.trend.stl.seasonal_span); }},
        {"seasonal_degree", [](Config& c, std::string_view v) { c.trend.stl.seasonal_degree = to_int("seasonal_degree", v); },
         [](const Config& c) { return std::to_string(c.trend.stl.seasonal_degree); }},
        {"trend_span", [](Config& c, std::string_view v) {
             const int span = to_int("trend_span", v);
             c.trend.stl.trend_span = span > 0 ? std::optional<int>(span) : std::nullopt;
         },
         [](const Config& c) { return std::to_string(c.trend.stl.resolved_trend_span(c.trend.period)); }},
        {"trend_degree", [](Config& c, std::string_view v) { c.trend.stl.trend_degree = to_int("trend_degree", v); },
         [](const Config& c) { return std::to_string(c.trend.stl.trend_degree); }},
        {"lowpass_span", [](Config& c, std::string_view v) {
             const int span = to_int("lowpass_span", v);
             c.trend.stl.lowpass_span = span > 0 ? std::optional<int>(span) : std::nullopt;
         },
         [](const Config& c) { return std::to_string(c.trend.stl.resolved_lowpass_span(c.trend.period)); }},
        {"lowpass_degree", [](Config& c, std::string_view v) { c.trend.stl.lowpass_degree = to_int("lowpass_degree", v); },
         [](const Config& c) { return std::to_string(c.trend.stl.lowpass_degree); }},
        {"inner_iterations", [](Config& c, std::string_view v) { c.trend.stl.inner_iterations = to_int("inner_iterations", v); },
         [](const Config& c) { return std::to_string(c.trend.stl.inner_iterations); }},
        {"outer_iterations", [](Config& c, std::string_view v) { c.trend.stl.outer_iterations = to_int("outer_iterations", v); },
         [](const Config& c) { return std::to_string(c.trend.stl.outer_iterations); }},
        {"slope_window", [](Config& c, std::string_view v) { c.forecast.slope_window = to_int("slope_window", v); },
         [](const Config& c) { return std::to_string(c.forecast.slope_window); }},
        {"horizon_days", [](Config& c, std::string_view v) { c.forecast.horizon_days = to_int("horizon_days", v); },
         [](const Config& c) { return std::to_string(c.forecast.horizon_days); }},
        {"history_extra_days", [](Config& c, std::string_view v) { c.probabilistic.history_extra_days = to_int("history_extra_days", v); },
         [](const Config& c) { return std::to_string(c.probabilistic.history_extra_days); }},
        {"min_history", [](Config& c, std::string_view v) { c.probabilistic.min_history = static_cast<std::size_t>(to_int("min_history", v)); },
         [](const Config& c) { return std::to_string(c.probabilistic.min_history); }},
        {"wis_normalized", [](Config& c, std::string_view v) { c.wis_normalized = to_bool("wis_normalized", v); },
         [](const Config& c) { return std::string(c.wis_normalized ? "true" : "false"); }},
        {"mad_window", [](Config& c, std::string_view v) { c.screening.mad_window = to_int("mad_window", v); },
         [](const Config& c) { return std::to_string(c.screening.mad_window); }},
        {"mad_threshold_sd", [](Config& c, std::string_view v) { c.screening.mad_threshold_sd = to_double("mad_threshold_sd", v); },
         [](const Config& c) { return csv::format_shortest(c.screening.mad_threshold_sd); }},
        {"min_reporting_percent", [](Config& c, std::string_view v) { c.screening.min_reporting_percent = to_int("min_reporting_percent", v); },
         [](const Config& c) { return std::to_string(c.screening.min_reporting_percent); }},
        {"max_missing_run", [](Config& c, std::string_view v) { c.screening.max_missing_run = to_int("max_missing_run", v); },
         [](const Config& c) { return std::to_string(c.screening.max_missing_run); }},
        {"n_exclude_outliers", [](Config& c, std::string_view v) { c.screening.n_exclude_outliers = static_cast<std::size_t>(to_int("n_exclude_outliers", v)); },
         [](const Config& c) { return std::to_string(c.screening.n_exclude_outliers); }},
        {"min_tests_per_million", [](Config& c, std::string_view v) { c.riskmap.min_tests_per_million = to_double("min_tests_per_million", v); },
         [](const Config& c) { return csv::format_shortest(c.riskmap.min_tests_per_million); }},
        {"incidence_per_100k", [](Config& c, std::string_view v) { c.riskmap.incidence_per_100k = to_double("incidence_per_100k", v); },
         [](const Config& c) { return csv::format_shortest(c.riskmap.incidence_per_100k); }},
        {"r_eff_threshold", [](Config& c, std::string_view v) { c.riskmap.r_eff = to_double("r_eff_threshold", v); },
         [](const Config& c) { return csv::format_shortest(c.riskmap.r_eff); }},
    };
    return table;
}

} // namespace

void Config::set(std::string_view key, std::string_view value) {
    for (const auto& f : fields()) {
        if (key == f.key) {
            f.set(*this, value);
            return;
        }
    }
    throw ContractError("unknown config key '" + std::string(key) + "'");
}

Config Config::parse(std::string_view text) {
    Config c;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty() || line.front() == '[') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ContractError("config line " + std::to_string(line_no) + " is not key = value");
        }
        c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    c.validate();
    return c;
}

Config Config::load(const std::string& path) {
    return parse(read_file(path));
}

std::string Config::dump() const {
    std::string out;
    for (const auto& f : fields()) {
        out += std::string(f.key) + " = " + f.get(*this) + "\n";
    }
    return out;
}

void Config::validate() {
    if (trend.window_length < 2 * trend.period || trend.window_length % 2 != 0) {
        throw ContractError("L must be even and at least two periods");
    }
    if (forecast.horizon_days < 14) {
        throw ContractError("horizon_days must cover the two weekly targets (>= 14)");
    }
    if (forecast.slope_window < 1) {
        throw ContractError("slope_window must be positive");
    }
    if (!(preprocess.p_zero_threshold > 0.0 && preprocess.p_zero_threshold < 1.0)) {
        throw ContractError("p_zero_threshold must lie in (0, 1)");
    }
    probabilistic.horizon_days = forecast.horizon_days;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace covtrend

#pragma once

#include "covtrend/forecast.hpp"
#include "covtrend/piecewise_trend.hpp"
#include "covtrend/preprocess.hpp"
#include "covtrend/probabilistic.hpp"
#include "covtrend/riskmap.hpp"
#include "covtrend/screening.hpp"

#include <string>
#include <string_view>

namespace covtrend {

/// Every tunable of the pipeline. Defaults are the values used throughout the tests.
struct Config {
    preprocess::Settings preprocess;
    trend::Settings trend;
    forecast::Settings forecast;
    probabilistic::Settings probabilistic;
    screening::Settings screening;
    riskmap::Thresholds riskmap;
    bool wis_normalized = false;

    /// Flat `key = value` text; '#' starts a comment; unknown keys throw ContractError.
    static Config parse(std::string_view text);
    static Config load(const std::string& path);

    /// Applies one key. Throws ContractError for unknown keys or malformed values.
    void set(std::string_view key, std::string_view value);

    /// All keys with their current values, one per line, in a fixed order.
    std::string dump() const;

    /// Keeps dependent settings consistent (forecast and quantile horizons) and checks ranges.
    void validate();
};

/// Reads a whole file. Throws Error when it cannot be opened.
std::string read_file(const std::string& path);

} // namespace covtrend

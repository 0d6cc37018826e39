#pragma once

#include "covtrend/config.hpp"
#include "covtrend/ingest.hpp"
#include "covtrend/pipeline.hpp"

#include <cctype>
#include <map>
#include <string>
#include <vector>

namespace test_support {

inline std::string data_path(const std::string& name) {
    return std::string(COVTREND_TEST_DATA) + "/" + name;
}

inline std::string stem_of(const std::string& label) {
    std::string out;
    for (char c : label) {
        out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_';
    }
    return out;
}

/// Hub files for the bundled sample keyed by file name, computed on `threads` workers.
inline std::map<std::string, std::string> sample_hub_files(int threads) {
    const auto series = covtrend::ingest::parse_long(covtrend::read_file(data_path("sample.csv")));
    const covtrend::Config config;
    std::vector<std::string> hub(series.size());
    covtrend::pipeline::parallel_for(series.size(), threads, [&](std::size_t i) {
        const auto f = covtrend::pipeline::run_region_forecast(series[i], config);
        std::vector<covtrend::ingest::HubForecast> rows;
        for (const auto& q : f.weekly) {
            rows.push_back({f.region.label(), f.kind, q});
        }
        hub[i] = covtrend::ingest::write_hub_quantiles(rows, f.origin_date);
    });
    std::map<std::string, std::string> out;
    for (std::size_t i = 0; i < series.size(); ++i) {
        out[stem_of(series[i].region.label()) + ".csv"] = hub[i];
    }
    return out;
}

inline std::map<std::string, std::string> frozen_hub_files() {
    std::map<std::string, std::string> out;
    for (const char* name : {"Aland.csv", "Bovia.csv", "Corland.csv", "Dunmark_North.csv", "Estoria.csv"}) {
        out[name] = covtrend::read_file(data_path(std::string("golden/") + name));
    }
    return out;
}

} // namespace test_support

#include "covtrend/series.hpp"

#include "covtrend/error.hpp"

#include <algorithm>

namespace covtrend {

std::string RegionKey::label() const {
    return subregion ? country + "/" + *subregion : country;
}

RegionKey RegionKey::from_label(std::string_view label) {
    RegionKey key;
    const auto slash = label.find('/');
    if (slash == std::string_view::npos) {
        key.country = std::string(label);
    } else {
        key.country = std::string(label.substr(0, slash));
        key.subregion = std::string(label.substr(slash + 1));
    }
    return key;
}

void RegionKey::validate() const {
    if (country.empty()) {
        throw ContractError("region has an empty country name");
    }
    if (population && *population <= 0) {
        throw ContractError("region " + label() + " has a non-positive population");
    }
    if (tests_per_million && *tests_per_million < 0) {
        throw ContractError("region " + label() + " has a negative testing rate");
    }
}

std::string_view to_string(SeriesKind kind) {
    return kind == SeriesKind::cases ? "cases" : "deaths";
}

SeriesKind parse_series_kind(std::string_view text) {
    if (text == "cases" || text == "case") {
        return SeriesKind::cases;
    }
    if (text == "deaths" || text == "death") {
        return SeriesKind::deaths;
    }
    throw ContractError("unknown series kind '" + std::string(text) + "'");
}

std::vector<double> DailySeries::dense() const {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(),
                   [](const std::optional<double>& v) { return v.value_or(0.0); });
    return out;
}

DailySeries DailySeries::truncated(Date last) const {
    DailySeries out{region, start_date, {}, kind};
    if (last < start_date) {
        return out;
    }
    const auto keep = std::min<std::size_t>(values.size(), static_cast<std::size_t>(last - start_date) + 1);
    out.values.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(keep));
    return out;
}

std::string_view to_string(Provenance p) {
    switch (p) {
    case Provenance::observed: return "observed";
    case Provenance::imputed: return "imputed";
    case Provenance::rescaled: return "rescaled";
    case Provenance::replaced: return "replaced";
    }
    return "observed";
}

std::vector<double> CleanSeries::trusted() const {
    if (values.empty()) {
        return {};
    }
    return {values.begin(), values.begin() + static_cast<std::ptrdiff_t>(forecast_anchor) + 1};
}

DailySeries CleanSeries::to_daily() const {
    DailySeries out{region, start_date, {}, kind};
    out.values.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i < absent.size() && absent[i]) {
            out.values.emplace_back();
        } else {
            out.values.emplace_back(values[i]);
        }
    }
    return out;
}

} // namespace covtrend

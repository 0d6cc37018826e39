#include "covtrend/stats.hpp"

#include "covtrend/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace covtrend::stats {

double mean(std::span<const double> xs) {
    if (xs.empty()) {
        throw ContractError("mean of an empty sample");
    }
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double median(std::span<const double> xs) {
    if (xs.empty()) {
        throw ContractError("median of an empty sample");
    }
    std::vector<double> v(xs.begin(), xs.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw ContractError("quantile of an empty sample");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ContractError("quantile level outside [0, 1]");
    }
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<double> quantiles(std::span<const double> xs, std::span<const double> levels) {
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out;
    out.reserve(levels.size());
    for (double p : levels) {
        out.push_back(quantile_sorted(sorted, p));
    }
    return out;
}

} // namespace covtrend::stats

#include "covtrend/synthetic.hpp"

#include "covtrend/error.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace covtrend::synthetic {

namespace {

double weekday_factor(const std::vector<double>& pattern, int t) {
    return pattern.empty() ? 1.0 : pattern[static_cast<std::size_t>(t % 7)];
}

void check_pattern(const std::vector<double>& pattern) {
    if (!pattern.empty() && pattern.size() != 7) {
        throw ContractError("weekday pattern needs 7 factors");
    }
}

} // namespace

DailySeries poisson_series(const std::string& region, Date start, int days, const std::function<double(int)>& mu,
                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    DailySeries out;
    out.region = RegionKey::from_label(region);
    out.start_date = start;
    out.values.reserve(static_cast<std::size_t>(std::max(days, 0)));
    for (int t = 0; t < days; ++t) {
        const double rate = mu(t);
        if (rate <= 0.0) {
            out.values.emplace_back(0.0);
            continue;
        }
        std::poisson_distribution<long long> draw(rate);
        out.values.emplace_back(static_cast<double>(draw(rng)));
    }
    return out;
}

std::function<double(int)> exponential_rate(double level, double weekly_growth, std::vector<double> weekday_pattern) {
    check_pattern(weekday_pattern);
    return [=, pattern = std::move(weekday_pattern)](int t) {
        return level * std::pow(weekly_growth, t / 7.0) * weekday_factor(pattern, t);
    };
}

std::function<double(int)> flat_rate(double level, std::vector<double> weekday_pattern) {
    check_pattern(weekday_pattern);
    return [=, pattern = std::move(weekday_pattern)](int t) { return level * weekday_factor(pattern, t); };
}

std::vector<DailySeries> poisson_panel(const std::string& prefix, int regions, Date start, int days,
                                       const std::function<double(int)>& mu, std::uint64_t seed) {
    std::vector<DailySeries> out;
    std::seed_seq seq{seed};
    std::vector<std::uint32_t> seeds(static_cast<std::size_t>(std::max(regions, 0)));
    seq.generate(seeds.begin(), seeds.end());
    for (int r = 0; r < regions; ++r) {
        char name[16];
        std::snprintf(name, sizeof name, "%02d", r + 1);
        out.push_back(poisson_series(prefix + name, start, days, mu, seeds[static_cast<std::size_t>(r)]));
    }
    return out;
}

std::vector<double> gaussian_noise(int n, double sd, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> draw(0.0, sd);
    std::vector<double> out(static_cast<std::size_t>(std::max(n, 0)));
    for (auto& v : out) {
        v = draw(rng);
    }
    return out;
}

} // namespace covtrend::synthetic

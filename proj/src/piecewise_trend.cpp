#include "covtrend/piecewise_trend.hpp"

#include "covtrend/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace covtrend {

std::size_t TrendEstimate::outlier_count() const {
    return static_cast<std::size_t>(std::count(outlier_mask.begin(), outlier_mask.end(), std::uint8_t{1}));
}

namespace trend {

namespace {

double sum_range(std::span<const double> v, std::size_t first, std::size_t last) {
    return std::accumulate(v.begin() + static_cast<std::ptrdiff_t>(first),
                           v.begin() + static_cast<std::ptrdiff_t>(last), 0.0);
}

void scale_range(std::vector<double>& v, std::size_t first, std::size_t last, double factor) {
    for (std::size_t i = first; i < last; ++i) {
        v[i] *= factor;
    }
}

// Adds `amount` to v[0..end) proportionally to the existing values; uniformly when they sum to 0.
void add_mass_before(std::vector<double>& v, std::size_t end, double amount) {
    if (end == 0 || amount == 0.0) {
        return;
    }
    const double prior = sum_range(v, 0, end);
    if (prior > 0.0) {
        scale_range(v, 0, end, (prior + amount) / prior);
    } else {
        for (std::size_t i = 0; i < end; ++i) {
            v[i] += amount / static_cast<double>(end);
        }
    }
}

struct PassResult {
    std::vector<double> trend;
    std::vector<double> weight;   // best robustness weight over the windows covering each day
    std::size_t windows = 0;
};

// Forces sum(trend) == total. Prefers rescaling only [0, segment_end); falls back to the whole trend.
void conserve_total(std::vector<double>& trend, std::size_t segment_end, double total) {
    const std::size_t n = trend.size();
    const double fixed = sum_range(trend, segment_end, n);
    const double segment = sum_range(trend, 0, segment_end);
    const double needed = total - fixed;
    if (needed >= 0.0 && segment > 0.0) {
        scale_range(trend, 0, segment_end, needed / segment);
        return;
    }
    if (needed >= 0.0 && segment_end > 0) {
        std::fill(trend.begin(), trend.begin() + static_cast<std::ptrdiff_t>(segment_end),
                  needed / static_cast<double>(segment_end));
        return;
    }
    const double all = fixed + segment;
    if (all > 0.0) {
        scale_range(trend, 0, n, total / all);
    } else {
        std::fill(trend.begin(), trend.end(), total / static_cast<double>(n));
    }
}

std::vector<double> clipped_trend(std::span<const double> window, const Settings& s,
                                  std::vector<double>& weights) {
    auto dec = smoothing::stl_decompose(window, s.period, s.stl);
    for (double& v : dec.trend) {
        v = std::max(0.0, v);
    }
    weights = std::move(dec.robustness_weights);
    return std::move(dec.trend);
}

PassResult single_window(std::span<const double> x, const Settings& s) {
    PassResult out;
    const std::size_t n = x.size();
    out.weight.assign(n, 1.0);
    const double total = std::accumulate(x.begin(), x.end(), 0.0);
    if (n >= 2 * static_cast<std::size_t>(s.period)) {
        out.trend = clipped_trend(x, s, out.weight);
        out.windows = 1;
    } else {
        out.trend.assign(n, total / static_cast<double>(n));
    }
    conserve_total(out.trend, n, total);
    return out;
}

PassResult windowed_pass(std::span<const double> x, const Settings& s) {
    const std::size_t n = x.size();
    const auto L = static_cast<std::size_t>(s.window_length);
    const std::size_t half = L / 2;

    std::vector<std::size_t> starts;
    for (std::ptrdiff_t st = static_cast<std::ptrdiff_t>(n - L); st > 0; st -= static_cast<std::ptrdiff_t>(half)) {
        starts.push_back(static_cast<std::size_t>(st));
    }
    starts.push_back(0);

    PassResult out;
    out.trend.assign(n, 0.0);
    out.weight.assign(n, 0.0);
    std::vector<double> data(x.begin(), x.end());   // receives redistributed excess
    std::vector<double> weights;
    std::size_t fixed_from = n;

    for (std::size_t w = 0; w < starts.size(); ++w) {
        const std::size_t start = starts[w];
        const auto seg = clipped_trend(std::span<const double>(data).subspan(start, L), s, weights);
        for (std::size_t i = 0; i < L; ++i) {
            out.weight[start + i] = std::max(out.weight[start + i], weights[i]);
        }
        ++out.windows;

        std::size_t segment_end = n;
        if (w == 0) {
            std::copy(seg.begin(), seg.end(), out.trend.begin() + static_cast<std::ptrdiff_t>(start));
            const double estimated = sum_range(out.trend, n - half, n);
            if (estimated > 0.0) {
                scale_range(out.trend, start, n, sum_range(x, n - half, n) / estimated);
            }
        } else {
            for (std::size_t d = start; d < fixed_from; ++d) {
                out.trend[d] = seg[d - start];
            }
            for (std::size_t tau = 1; tau <= half; ++tau) {
                const std::size_t d = fixed_from + tau - 1;
                const double sigma = blend_weight(static_cast<int>(tau), s.window_length);
                out.trend[d] = sigma * seg[d - start] + (1.0 - sigma) * out.trend[d];
            }
            segment_end = fixed_from + half;
        }
        fixed_from = start;

        if (start == 0) {
            conserve_total(out.trend, segment_end, sum_range(x, 0, n));
            break;
        }
        if (w == 0) {
            continue;
        }
        // Raw counts versus estimate over the covered suffix [start, n).
        const double excess = sum_range(x, start, n) - sum_range(out.trend, start, n);
        if (excess > 0.0) {
            add_mass_before(data, start, excess);
        } else if (excess < 0.0) {
            const double segment = sum_range(out.trend, start, segment_end);
            if (segment > 0.0) {
                scale_range(out.trend, start, segment_end, std::max(0.0, (segment + excess) / segment));
            }
        }
    }
    return out;
}

PassResult run_pass(std::span<const double> x, const Settings& s) {
    if (x.size() < static_cast<std::size_t>(s.window_length)) {
        return single_window(x, s);
    }
    return windowed_pass(x, s);
}

} // namespace

double blend_weight(int tau, int window_length) {
    const double a = 21.1 / window_length;
    const double b = 5.46;
    return 1.0 / (1.0 + std::exp(a * (tau - 1) - b));
}

std::vector<double> blend_overlap(std::span<const double> older, std::span<const double> newer, int window_length) {
    const auto half = static_cast<std::size_t>(window_length / 2);
    if (older.size() != half || newer.size() != half) {
        throw ContractError("blend inputs must both cover L/2 = " + std::to_string(half) + " days");
    }
    std::vector<double> out(half);
    for (std::size_t i = 0; i < half; ++i) {
        const double sigma = blend_weight(static_cast<int>(i + 1), window_length);
        out[i] = sigma * older[i] + (1.0 - sigma) * newer[i];
    }
    return out;
}

TrendEstimate estimate_piecewise_trend(std::span<const double> counts, const Settings& settings) {
    if (settings.window_length < 2 * settings.period || settings.window_length % 2 != 0) {
        throw ContractError("window length must be even and cover at least two periods");
    }
    for (double v : counts) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ContractError("trend input must be finite and non-negative");
        }
    }
    TrendEstimate est;
    est.window_length = settings.window_length;
    est.outlier_mask.assign(counts.size(), 0);
    if (counts.empty()) {
        return est;
    }
    est.degenerate = counts.size() < static_cast<std::size_t>(settings.window_length);

    auto first = run_pass(counts, settings);
    est.windows = first.windows;

    std::vector<double> corrected(counts.begin(), counts.end());
    bool moved = false;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (first.windows == 0 || first.weight[i] >= settings.outlier_weight_threshold) {
            continue;
        }
        est.outlier_mask[i] = 1;
        const double excess = corrected[i] - first.trend[i];
        if (excess <= 0.0 || i == 0) {
            continue;
        }
        corrected[i] = first.trend[i];
        add_mass_before(corrected, i, excess);
        moved = true;
    }

    if (!moved) {
        est.values = std::move(first.trend);
        return est;
    }
    est.values = run_pass(corrected, settings).trend;
    // The corrected counts carry the same total; pin it to the original input sum.
    conserve_total(est.values, est.values.size(), std::accumulate(counts.begin(), counts.end(), 0.0));
    return est;
}

TrendEstimate estimate_piecewise_trend(const CleanSeries& series, const Settings& settings) {
    const auto trusted = series.trusted();
    return estimate_piecewise_trend(trusted, settings);
}

} // namespace trend
} // namespace covtrend

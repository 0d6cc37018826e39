#include "covtrend/smoothing.hpp"

#include "covtrend/error.hpp"
#include "covtrend/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace covtrend::smoothing {

namespace {

double cube(double v) { return v * v * v; }

struct Estimate {
    double value = 0.0;
    bool ok = false;
    bool singular = false;
};

// Local polynomial estimate at position x from observations [left, right] (0-based, inclusive).
// `span` is the nominal number of neighbours; when it exceeds y.size() the bandwidth is widened
// by the missing half-span so that very wide smoothers approach a global fit.
Estimate local_estimate(std::span<const double> y, int span, int degree, double x, int left, int right,
                        std::span<const double> rw, std::vector<double>& w) {
    const int n = static_cast<int>(y.size());
    double h = std::max(x - left, right - x);
    if (span > n) {
        h += static_cast<double>((span - n) / 2);
    }
    const double h9 = 0.999 * h;
    const double h1 = 0.001 * h;

    double total = 0.0;
    for (int j = left; j <= right; ++j) {
        const double r = std::abs(j - x);
        double wj = 0.0;
        if (r <= h9) {
            wj = r <= h1 ? 1.0 : cube(1.0 - cube(r / h));
            if (!rw.empty()) {
                wj *= rw[static_cast<std::size_t>(j)];
            }
        }
        w[static_cast<std::size_t>(j)] = wj;
        total += wj;
    }
    Estimate est;
    if (total <= 0.0) {
        return est;
    }
    for (int j = left; j <= right; ++j) {
        w[static_cast<std::size_t>(j)] /= total;
    }

    if (h > 0.0 && degree > 0) {
        const double range = static_cast<double>(n - 1);
        double centre = 0.0;
        for (int j = left; j <= right; ++j) {
            centre += w[static_cast<std::size_t>(j)] * j;
        }
        double m2 = 0.0;
        double m3 = 0.0;
        double m4 = 0.0;
        for (int j = left; j <= right; ++j) {
            const double u = j - centre;
            const double wu2 = w[static_cast<std::size_t>(j)] * u * u;
            m2 += wu2;
            m3 += wu2 * u;
            m4 += wu2 * u * u;
        }
        const double u0 = x - centre;
        if (std::sqrt(m2) <= 0.001 * range) {
            est.singular = true;
        } else if (degree == 1) {
            const double b = u0 / m2;
            for (int j = left; j <= right; ++j) {
                w[static_cast<std::size_t>(j)] *= b * (j - centre) + 1.0;
            }
        } else {
            // Normal matrix of the basis {1, u, u^2} with sum w = 1 and sum w u = 0.
            const double det = m2 * m4 - m3 * m3 - m2 * m2 * m2;
            if (!(det > 1e-10 * m2 * m4)) {
                est.singular = true;
            } else {
                // Solve M z = (1, u0, u0^2) by cofactors; M is symmetric.
                const double c00 = m2 * m4 - m3 * m3;
                const double c01 = m2 * m3;
                const double c02 = -m2 * m2;
                const double c11 = m4 - m2 * m2;
                const double c12 = -m3;
                const double c22 = m2;
                const double r0 = 1.0;
                const double r1 = u0;
                const double r2 = u0 * u0;
                const double z0 = (c00 * r0 + c01 * r1 + c02 * r2) / det;
                const double z1 = (c01 * r0 + c11 * r1 + c12 * r2) / det;
                const double z2 = (c02 * r0 + c12 * r1 + c22 * r2) / det;
                for (int j = left; j <= right; ++j) {
                    const double u = j - centre;
                    w[static_cast<std::size_t>(j)] *= z0 + z1 * u + z2 * u * u;
                }
            }
        }
    }

    double value = 0.0;
    for (int j = left; j <= right; ++j) {
        value += w[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
    }
    est.value = value;
    est.ok = true;
    return est;
}

// Smooths every point with a `span`-nearest-neighbour window. Returns the fallback count.
std::size_t smooth_all(std::span<const double> y, int span, int degree, std::span<const double> rw,
                       std::vector<double>& out, std::vector<double>& work) {
    const int n = static_cast<int>(y.size());
    out.assign(y.begin(), y.end());
    work.resize(y.size());
    if (n < 2) {
        return 0;
    }
    std::size_t fallbacks = 0;
    const int half = (span + 1) / 2;
    for (int i = 0; i < n; ++i) {
        int left = 0;
        int right = n - 1;
        if (span < n) {
            left = std::clamp(i - half + 1, 0, n - span);
            right = left + span - 1;
        }
        auto est = local_estimate(y, span, degree, i, left, right, rw, work);
        if (!est.ok) {
            // Every neighbour carries zero robustness weight: plain tricube mean.
            est = local_estimate(y, span, 0, i, left, right, {}, work);
            ++fallbacks;
        } else if (est.singular) {
            ++fallbacks;
        }
        out[static_cast<std::size_t>(i)] = est.ok ? est.value : y[static_cast<std::size_t>(i)];
    }
    return fallbacks;
}

void moving_average(std::span<const double> x, int len, std::vector<double>& out) {
    const int n = static_cast<int>(x.size());
    const int m = n - len + 1;
    out.assign(static_cast<std::size_t>(std::max(m, 0)), 0.0);
    if (m <= 0) {
        return;
    }
    double sum = 0.0;
    for (int i = 0; i < len; ++i) {
        sum += x[static_cast<std::size_t>(i)];
    }
    out[0] = sum / len;
    for (int i = 1; i < m; ++i) {
        sum += x[static_cast<std::size_t>(i + len - 1)] - x[static_cast<std::size_t>(i - 1)];
        out[static_cast<std::size_t>(i)] = sum / len;
    }
}

int next_odd(double v) {
    int k = static_cast<int>(std::ceil(v));
    if (k % 2 == 0) {
        ++k;
    }
    return k;
}

class Stl {
public:
    Stl(std::span<const double> y, int period, const StlParams& params)
        : y_(y), n_(static_cast<int>(y.size())), period_(period), params_(params),
          trend_span_(params.resolved_trend_span(period)), lowpass_span_(params.resolved_lowpass_span(period)) {}

    StlDecomposition run() {
        StlDecomposition out;
        out.trend.assign(y_.size(), 0.0);
        out.seasonal.assign(y_.size(), 0.0);
        std::vector<double> rw;   // empty: unit weights on the first pass
        for (int pass = 0;; ++pass) {
            inner_loop(rw, out.seasonal, out.trend);
            if (pass >= params_.outer_iterations) {
                break;
            }
            rw = robustness(out);
        }
        out.residual = residuals(out);
        out.robustness_weights = robustness(out);
        return out;
    }

private:
    // Residuals at rounding level count as exact fits, so a perfectly smooth input keeps weight 1.
    std::vector<double> robustness(const StlDecomposition& d) const {
        auto r = residuals(d);
        double magnitude = 0.0;
        for (double v : y_) {
            magnitude = std::max(magnitude, std::abs(v));
        }
        const double floor = 1e-10 * magnitude;
        for (double& v : r) {
            if (std::abs(v) <= floor) {
                v = 0.0;
            }
        }
        return bisquare_weights(r);
    }

    std::vector<double> residuals(const StlDecomposition& d) const {
        std::vector<double> r(y_.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] = y_[i] - d.trend[i] - d.seasonal[i];
        }
        return r;
    }

    void inner_loop(const std::vector<double>& rw, std::vector<double>& seasonal, std::vector<double>& trend) {
        std::vector<double> detrended(y_.size());
        std::vector<double> cycle;
        std::vector<double> lowpass;
        std::vector<double> scratch;
        std::vector<double> smoothed;
        for (int it = 0; it < params_.inner_iterations; ++it) {
            for (int i = 0; i < n_; ++i) {
                detrended[static_cast<std::size_t>(i)] = y_[static_cast<std::size_t>(i)] - trend[static_cast<std::size_t>(i)];
            }
            if (period_ > 1) {
                cycle_subseries(detrended, rw, cycle);
                low_pass(cycle, lowpass);
                for (int i = 0; i < n_; ++i) {
                    seasonal[static_cast<std::size_t>(i)] =
                        cycle[static_cast<std::size_t>(period_ + i)] - lowpass[static_cast<std::size_t>(i)];
                }
            }
            for (int i = 0; i < n_; ++i) {
                detrended[static_cast<std::size_t>(i)] = y_[static_cast<std::size_t>(i)] - seasonal[static_cast<std::size_t>(i)];
            }
            smooth_all(detrended, trend_span_, params_.trend_degree, rw, smoothed, scratch);
            trend = smoothed;
        }
    }

    // Smooths each cycle-subseries and extends it by one cycle at both ends.
    // Output has n + 2 * period entries; entry period + i lines up with y[i].
    void cycle_subseries(const std::vector<double>& x, const std::vector<double>& rw, std::vector<double>& cycle) {
        cycle.assign(static_cast<std::size_t>(n_ + 2 * period_), 0.0);
        std::vector<double> sub;
        std::vector<double> sub_rw;
        std::vector<double> fit;
        std::vector<double> work;
        const int span = params_.seasonal_span;
        const int degree = params_.seasonal_degree;
        for (int phase = 0; phase < period_; ++phase) {
            sub.clear();
            sub_rw.clear();
            for (int i = phase; i < n_; i += period_) {
                sub.push_back(x[static_cast<std::size_t>(i)]);
                if (!rw.empty()) {
                    sub_rw.push_back(rw[static_cast<std::size_t>(i)]);
                }
            }
            const int k = static_cast<int>(sub.size());
            smooth_all(sub, span, degree, sub_rw, fit, work);

            work.resize(sub.size());
            auto before = local_estimate(sub, span, degree, -1.0, 0, std::min(span, k) - 1, sub_rw, work);
            if (!before.ok) {
                before = local_estimate(sub, span, 0, -1.0, 0, std::min(span, k) - 1, {}, work);
            }
            auto after = local_estimate(sub, span, degree, k, std::max(0, k - span), k - 1, sub_rw, work);
            if (!after.ok) {
                after = local_estimate(sub, span, 0, k, std::max(0, k - span), k - 1, {}, work);
            }

            cycle[static_cast<std::size_t>(phase)] = before.ok ? before.value : fit.front();
            for (int m = 0; m < k; ++m) {
                cycle[static_cast<std::size_t>((m + 1) * period_ + phase)] = fit[static_cast<std::size_t>(m)];
            }
            cycle[static_cast<std::size_t>((k + 1) * period_ + phase)] = after.ok ? after.value : fit.back();
        }
    }

    // Moving averages of lengths period, period, 3, then LOESS; n + 2 period -> n values.
    void low_pass(const std::vector<double>& cycle, std::vector<double>& out) {
        std::vector<double> a;
        std::vector<double> b;
        moving_average(cycle, period_, a);
        moving_average(a, period_, b);
        moving_average(b, 3, a);
        std::vector<double> work;
        smooth_all(a, lowpass_span_, params_.lowpass_degree, {}, out, work);
    }

    std::span<const double> y_;
    int n_;
    int period_;
    StlParams params_;
    int trend_span_;
    int lowpass_span_;
};

} // namespace

LoessFit loess_fit(std::span<const double> y, const LoessConfig& config) {
    if (config.degree < 0 || config.degree > 2) {
        throw ContractError("LOESS degree must be 0, 1 or 2");
    }
    if (config.span < config.degree + 2) {
        throw ContractError("LOESS span must be at least degree + 2");
    }
    if (static_cast<std::size_t>(config.span) > y.size()) {
        throw ContractError("LOESS span " + std::to_string(config.span) + " exceeds series length " +
                            std::to_string(y.size()));
    }
    if (!config.robustness_weights.empty()) {
        if (config.robustness_weights.size() != y.size()) {
            throw ContractError("robustness weights must match the series length");
        }
        for (double w : config.robustness_weights) {
            if (!(w >= 0.0 && w <= 1.0)) {
                throw ContractError("robustness weights must lie in [0, 1]");
            }
        }
    }
    LoessFit fit;
    std::vector<double> work;
    fit.fallbacks = smooth_all(y, config.span, config.degree, config.robustness_weights, fit.values, work);
    return fit;
}

int StlParams::resolved_trend_span(int period) const {
    if (trend_span) {
        return *trend_span;
    }
    if (period <= 1) {
        return 3;
    }
    return next_odd(1.5 * period / (1.0 - 1.5 / seasonal_span));
}

int StlParams::resolved_lowpass_span(int period) const {
    return lowpass_span ? *lowpass_span : next_odd(period);
}

StlDecomposition stl_decompose(std::span<const double> y, int period, const StlParams& params) {
    if (period < 1) {
        throw ContractError("STL period must be at least 1");
    }
    if (y.size() < 2 * static_cast<std::size_t>(period)) {
        throw ContractError("STL needs at least two full periods of data");
    }
    if (params.seasonal_span < 3 || params.inner_iterations < 1 || params.outer_iterations < 0) {
        throw ContractError("invalid STL parameters");
    }
    for (double v : y) {
        if (!std::isfinite(v)) {
            throw ContractError("STL input contains non-finite values");
        }
    }
    return Stl(y, period, params).run();
}

std::vector<double> bisquare_weights(std::span<const double> residuals) {
    std::vector<double> w(residuals.size(), 1.0);
    if (residuals.empty()) {
        return w;
    }
    std::vector<double> abs_r(residuals.size());
    std::transform(residuals.begin(), residuals.end(), abs_r.begin(), [](double r) { return std::abs(r); });
    const double scale = 6.0 * stats::median(abs_r);
    if (scale <= 0.0) {
        return w;
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double u = abs_r[i] / scale;
        w[i] = u < 1.0 ? (1.0 - u * u) * (1.0 - u * u) : 0.0;
    }
    return w;
}

} // namespace covtrend::smoothing

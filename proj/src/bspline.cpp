#include "covtrend/bspline.hpp"

#include "covtrend/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace covtrend::bspline {

std::vector<double> basis(const std::vector<double>& knots, int degree, double x) {
    const std::size_t count = knots.size() - static_cast<std::size_t>(degree) - 1;
    // Degree-0 indicators on [t_j, t_{j+1}); the last non-empty interval is closed on the right.
    std::vector<double> b(knots.size() - 1, 0.0);
    std::size_t last_nonempty = 0;
    for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
        if (knots[j] < knots[j + 1]) {
            last_nonempty = j;
        }
    }
    for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
        if ((x >= knots[j] && x < knots[j + 1]) || (j == last_nonempty && x == knots[j + 1])) {
            b[j] = 1.0;
        }
    }
    for (int d = 1; d <= degree; ++d) {
        for (std::size_t j = 0; j + static_cast<std::size_t>(d) + 1 < knots.size(); ++j) {
            double v = 0.0;
            const double left = knots[j + static_cast<std::size_t>(d)] - knots[j];
            const double right = knots[j + static_cast<std::size_t>(d) + 1] - knots[j + 1];
            if (left > 0.0) {
                v += (x - knots[j]) / left * b[j];
            }
            if (right > 0.0) {
                v += (knots[j + static_cast<std::size_t>(d) + 1] - x) / right * b[j + 1];
            }
            b[j] = v;
        }
    }
    b.resize(count);
    return b;
}

PenalizedCubicSpline PenalizedCubicSpline::fit(std::span<const double> x, std::span<const double> y,
                                               double knot_spacing) {
    if (x.size() != y.size() || x.size() < 4) {
        throw ContractError("spline fit needs at least 4 paired points");
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i] > x[i - 1])) {
            throw ContractError("spline abscissae must be strictly increasing");
        }
    }
    if (!(knot_spacing > 0.0)) {
        throw ContractError("knot spacing must be positive");
    }

    PenalizedCubicSpline s;
    s.lower_ = x.front();
    s.upper_ = x.back();
    const int intervals = std::max(1, static_cast<int>(std::ceil((s.upper_ - s.lower_) / knot_spacing - 1e-9)));
    const double step = (s.upper_ - s.lower_) / intervals;
    for (int j = -3; j <= intervals + 3; ++j) {
        s.knots_.push_back(s.lower_ + j * step);
    }
    s.knots_[3] = s.lower_;
    s.knots_[static_cast<std::size_t>(intervals) + 3] = s.upper_;

    const auto n = static_cast<Eigen::Index>(x.size());
    const auto p = static_cast<Eigen::Index>(s.knots_.size() - 4);
    Eigen::MatrixXd B(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto row = basis(s.knots_, 3, x[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < p; ++j) {
            B(i, j) = row[static_cast<std::size_t>(j)];
        }
    }
    Eigen::VectorXd yv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        yv(i) = y[static_cast<std::size_t>(i)];
    }
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(std::max<Eigen::Index>(p - 2, 0), p);
    for (Eigen::Index i = 0; i + 2 < p; ++i) {
        D(i, i) = 1.0;
        D(i, i + 1) = -2.0;
        D(i, i + 2) = 1.0;
    }
    const Eigen::MatrixXd BtB = B.transpose() * B;
    const Eigen::MatrixXd DtD = D.transpose() * D;
    const Eigen::VectorXd Bty = B.transpose() * yv;

    double best_gcv = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best;
    for (int g = 0; g <= 48; ++g) {
        const double lambda = std::pow(10.0, -6.0 + 0.25 * g);
        const Eigen::MatrixXd A = BtB + lambda * DtD;
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
        if (ldlt.info() != Eigen::Success) {
            continue;
        }
        const Eigen::VectorXd c = ldlt.solve(Bty);
        const double rss = (yv - B * c).squaredNorm();
        const double edf = ldlt.solve(BtB).trace();
        const double denom = static_cast<double>(n) - edf;
        if (denom <= 0.0) {
            continue;
        }
        const double gcv = static_cast<double>(n) * rss / (denom * denom);
        if (gcv < best_gcv) {
            best_gcv = gcv;
            best = c;
            s.lambda_ = lambda;
            s.edf_ = edf;
        }
    }
    if (best.size() == 0) {
        throw ContractError("spline fit failed for every penalty weight");
    }
    s.coefs_.assign(best.data(), best.data() + best.size());
    return s;
}

double PenalizedCubicSpline::value(double x) const {
    const auto b = basis(knots_, 3, std::clamp(x, lower_, upper_));
    double v = 0.0;
    for (std::size_t j = 0; j < coefs_.size(); ++j) {
        v += coefs_[j] * b[j];
    }
    return v;
}

double PenalizedCubicSpline::derivative(double x) const {
    // d/dx sum c_j B_{j,3} = sum 3 (c_j - c_{j-1}) / (t_{j+3} - t_j) B_{j,2}
    const auto b = basis(knots_, 2, std::clamp(x, lower_, upper_));
    double v = 0.0;
    for (std::size_t j = 1; j < coefs_.size(); ++j) {
        const double span = knots_[j + 3] - knots_[j];
        if (span > 0.0) {
            v += 3.0 * (coefs_[j] - coefs_[j - 1]) / span * b[j];
        }
    }
    return v;
}

} // namespace covtrend::bspline

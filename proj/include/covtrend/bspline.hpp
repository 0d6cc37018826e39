#pragma once

#include <span>
#include <vector>

namespace covtrend::bspline {

/// Cubic B-spline on uniform knots with a second-difference roughness penalty (P-spline).
class PenalizedCubicSpline {
public:
    /// Fits y(x) with knots every `knot_spacing` units of x; the penalty weight is chosen by
    /// generalized cross-validation over a log grid. x must be strictly increasing, >= 4 points.
    static PenalizedCubicSpline fit(std::span<const double> x, std::span<const double> y, double knot_spacing);

    double value(double x) const;
    double derivative(double x) const;

    double lower() const { return lower_; }
    double upper() const { return upper_; }
    double lambda() const { return lambda_; }
    double effective_dof() const { return edf_; }

private:
    std::vector<double> knots_;
    std::vector<double> coefs_;
    double lower_ = 0.0;
    double upper_ = 0.0;
    double lambda_ = 0.0;
    double edf_ = 0.0;
};

/// Values of all degree-`degree` B-spline basis functions at x for the given knot vector.
std::vector<double> basis(const std::vector<double>& knots, int degree, double x);

} // namespace covtrend::bspline

#pragma once

#include <vector>

namespace credit_curves::splines {

/// Exponential spline basis: three smooth ("no-knot") factors e^{-k alpha t},
/// followed by one knot factor per entry of `knots`.
struct SplineBasis {
    double alpha = 0.0;
    int num_no_knot = 3;
    std::vector<double> knots;

    SplineBasis(double alpha, std::vector<double> knots = {});

    std::size_t size() const { return static_cast<std::size_t>(num_no_knot) + knots.size(); }
};

/// e^{-k alpha t} for k in 1..3.
double eval_no_knot(int k, double t, double alpha);

/// Knot factor: zero up to the knot, then
/// 1/3 + e^{-2a d} - e^{-a d} - e^{-3a d}/3 with d = t - knot.
/// Value and first derivative are continuous at the knot; tends to 1/3.
double eval_knot(double t, double alpha, double knot);

/// Derivative of eval_knot with respect to t.
double eval_knot_derivative(double t, double alpha, double knot);

/// All factors at t, no-knot factors first, then knot factors in knot order.
std::vector<double> basis_row(const SplineBasis& basis, double t);

} // namespace credit_curves::splines

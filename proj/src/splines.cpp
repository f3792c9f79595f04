#include "credit_curves/splines.hpp"

#include "credit_curves/errors.hpp"

#include <cmath>
#include <string>

namespace credit_curves::splines {

SplineBasis::SplineBasis(double alpha_, std::vector<double> knots_)
    : alpha(alpha_), knots(std::move(knots_)) {
    if (!(alpha > 0.0)) {
        throw InvalidInput("spline decay rate must be positive");
    }
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!(knots[i] > 0.0)) {
            throw InvalidInput("spline knots must be positive");
        }
        if (i > 0 && !(knots[i] > knots[i - 1])) {
            throw InvalidInput("spline knots must be strictly increasing");
        }
    }
}

double eval_no_knot(int k, double t, double alpha) {
    if (k < 1 || k > 3) {
        throw InvalidInput("no-knot factor index must be 1, 2 or 3, got " + std::to_string(k));
    }
    if (t < 0.0) {
        throw InvalidInput("spline tenor must be non-negative");
    }
    return std::exp(-k * alpha * t);
}

double eval_knot(double t, double alpha, double knot) {
    if (t < 0.0 || !(knot > 0.0)) {
        throw InvalidInput("knot factor requires t >= 0 and a positive knot");
    }
    if (t <= knot) {
        return 0.0;
    }
    const double x = std::exp(-alpha * (t - knot));
    // 1/3 + x^2 - x - x^3/3, written to limit cancellation near the knot
    // where 1/3 - x + x^2 - x^3/3 = (1 - x)^3 / 3.
    const double u = 1.0 - x;
    return u * u * u / 3.0;
}

double eval_knot_derivative(double t, double alpha, double knot) {
    if (t <= knot) {
        return 0.0;
    }
    const double x = std::exp(-alpha * (t - knot));
    const double u = 1.0 - x;
    return alpha * x * u * u;
}

std::vector<double> basis_row(const SplineBasis& basis, double t) {
    std::vector<double> row;
    row.reserve(basis.size());
    for (int k = 1; k <= basis.num_no_knot; ++k) {
        row.push_back(eval_no_knot(k, t, basis.alpha));
    }
    for (double knot : basis.knots) {
        row.push_back(eval_knot(t, basis.alpha, knot));
    }
    return row;
}

} // namespace credit_curves::splines

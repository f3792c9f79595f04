#pragma once

#include <functional>

namespace credit_curves {

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

struct RootOptions {
    /// Initial bracket, widened step by step up to `max_bracket`.
    Bracket initial{-0.5, 3.0};
    Bracket max_bracket{-0.9, 10.0};
    /// Convergence on |f(x)|.
    double value_tolerance = 1e-10;
    /// Convergence on bracket width, checked together with value_tolerance.
    double width_tolerance = 1e-12;
    int max_iterations = 200;
};

struct RootResult {
    double root = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// Root of a monotone function on an expanding bracket: bisection steps with
/// secant refinement whenever the secant lands inside the bracket and the
/// previous step shrank it by at least half.
/// Throws UnattainablePrice if no sign change is found within `max_bracket`.
RootResult find_monotone_root(const std::function<double(double)>& f, const RootOptions& options = {});

} // namespace credit_curves

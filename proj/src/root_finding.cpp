#include "credit_curves/root_finding.hpp"

#include "credit_curves/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace credit_curves {

namespace {

bool opposite_signs(double a, double b) {
    return (a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0);
}

} // namespace

RootResult find_monotone_root(const std::function<double(double)>& f, const RootOptions& options) {
    // Widening sequence from the initial bracket to the maximal one.
    const auto& init = options.initial;
    const auto& widest = options.max_bracket;
    const std::array<Bracket, 4> brackets{{
        init,
        {0.5 * (init.lo + widest.lo), 0.5 * (init.hi + widest.hi)},
        {widest.lo, 0.5 * (init.hi + widest.hi)},
        widest,
    }};

    double a = 0.0;
    double b = 0.0;
    double fa = 0.0;
    double fb = 0.0;
    bool found = false;
    for (const auto& br : brackets) {
        a = br.lo;
        b = br.hi;
        fa = f(a);
        fb = f(b);
        if (std::isfinite(fa) && std::isfinite(fb) && opposite_signs(fa, fb)) {
            found = true;
            break;
        }
    }
    if (!found) {
        throw UnattainablePrice("no root within spread bracket [" + std::to_string(widest.lo) + ", " +
                                std::to_string(widest.hi) + "]");
    }
    if (fa == 0.0) {
        return {a, 0.0, 0};
    }
    if (fb == 0.0) {
        return {b, 0.0, 0};
    }

    RootResult result;
    double prev_width = b - a;
    bool use_secant = true;
    for (int it = 1; it <= options.max_iterations; ++it) {
        double x = 0.5 * (a + b);
        if (use_secant) {
            const double s = b - fb * (b - a) / (fb - fa);
            if (std::isfinite(s) && s > a && s < b) {
                x = s;
            }
        }
        const double fx = f(x);
        result = {x, fx, it};
        if (fx == 0.0) {
            return result;
        }
        if (opposite_signs(fa, fx)) {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
        const double width = b - a;
        if (std::abs(fx) <= options.value_tolerance && width <= options.width_tolerance * std::max(1.0, std::abs(x))) {
            return result;
        }
        // Bisect whenever the last step failed to halve the bracket.
        use_secant = width <= 0.5 * prev_width;
        prev_width = width;
    }
    if (std::abs(result.residual) <= options.value_tolerance) {
        return result;
    }
    throw UnattainablePrice("root search did not converge within the iteration cap");
}

} // namespace credit_curves

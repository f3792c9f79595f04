#include "credit_curves/curves.hpp"

#include "credit_curves/errors.hpp"
#include "credit_curves/splines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace credit_curves {

DiscountCurve::DiscountCurve(std::vector<ZeroPillar> pillars, DiscountInterpolation rule)
    : pillars_(std::move(pillars)), rule_(rule) {
    if (pillars_.empty()) {
        throw InvalidInput("discount curve needs at least one pillar");
    }
    if (!(pillars_.front().tenor > 0.0)) {
        throw InvalidInput("first discount pillar tenor must be positive");
    }
    for (std::size_t i = 0; i < pillars_.size(); ++i) {
        if (!std::isfinite(pillars_[i].zero_rate) || !std::isfinite(pillars_[i].tenor)) {
            throw InvalidInput("discount pillars must be finite");
        }
        if (i > 0 && !(pillars_[i].tenor > pillars_[i - 1].tenor)) {
            throw InvalidInput("discount pillar tenors must be strictly increasing");
        }
    }
    log_discount_.reserve(pillars_.size());
    for (const auto& p : pillars_) {
        log_discount_.push_back(-p.zero_rate * p.tenor);
    }
}

DiscountCurve DiscountCurve::flat(double zero_rate) {
    return DiscountCurve({{1.0, zero_rate}});
}

double DiscountCurve::discount(double t) const {
    if (t < 0.0) {
        throw InvalidInput("discount tenor must be non-negative");
    }
    if (t == 0.0) {
        return 1.0;
    }
    if (t >= pillars_.back().tenor) {
        return std::exp(-pillars_.back().zero_rate * t);
    }
    const auto it = std::upper_bound(pillars_.begin(), pillars_.end(), t,
                                     [](double x, const ZeroPillar& p) { return x < p.tenor; });
    const auto idx = static_cast<std::size_t>(std::distance(pillars_.begin(), it));
    const double t1 = idx == 0 ? 0.0 : pillars_[idx - 1].tenor;
    const double l1 = idx == 0 ? 0.0 : log_discount_[idx - 1];
    const double t2 = pillars_[idx].tenor;
    const double l2 = log_discount_[idx];
    const double w = (t - t1) / (t2 - t1);
    return std::exp((1.0 - w) * l1 + w * l2);
}

double DiscountCurve::zero_rate(double t) const {
    if (!(t > 0.0)) {
        throw InvalidInput("zero rate is defined for positive tenors only");
    }
    return -std::log(discount(t)) / t;
}

SurvivalCurve::SurvivalCurve(double alpha, std::array<double, 3> betas,
                             std::vector<double> constraint_grid, double t_max)
    : alpha_(alpha), betas_(betas), constraint_grid_(std::move(constraint_grid)), t_max_(t_max) {
    if (!(alpha_ >= 0.0) || !std::isfinite(alpha_)) {
        throw InvalidInput("survival decay factor must be finite and non-negative");
    }
    if (!(t_max_ > 0.0)) {
        throw InvalidInput("survival horizon must be positive");
    }
    double scale = 1.0;
    for (double b : betas_) {
        if (!std::isfinite(b)) {
            throw InvalidInput("survival coefficients must be finite");
        }
        scale = std::max(scale, std::abs(b));
    }
    const double sum = betas_[0] + betas_[1] + betas_[2];
    if (std::abs(sum - 1.0) > kBetaSumTolerance * scale * 4.0) {
        throw InvalidInput("survival coefficients must sum to one");
    }
    std::sort(constraint_grid_.begin(), constraint_grid_.end());
}

SurvivalCurve SurvivalCurve::flat_hazard(double hazard, double t_max) {
    return SurvivalCurve(hazard, {1.0, 0.0, 0.0}, {}, t_max);
}

SurvivalCurve SurvivalCurve::riskless(double t_max) {
    return SurvivalCurve(0.0, {1.0, 0.0, 0.0}, {}, t_max);
}

double SurvivalCurve::survival(double t) const {
    if (t < 0.0) {
        throw InvalidInput("survival tenor must be non-negative");
    }
    double q = 0.0;
    for (int k = 1; k <= 3; ++k) {
        q += betas_[k - 1] * splines::eval_no_knot(k, t, alpha_);
    }
    return q;
}

double SurvivalCurve::density(double t) const {
    if (t < 0.0) {
        throw InvalidInput("survival tenor must be non-negative");
    }
    double d = 0.0;
    for (int k = 1; k <= 3; ++k) {
        d += k * alpha_ * betas_[k - 1] * splines::eval_no_knot(k, t, alpha_);
    }
    return d;
}

double SurvivalCurve::hazard(double t) const {
    const double q = survival(t);
    if (!(q > 0.0)) {
        throw DomainError("hazard rate undefined where survival probability is not positive");
    }
    return density(t) / q;
}

double SurvivalCurve::default_prob(double t1, double t2) const {
    if (t1 < 0.0 || t1 > t2) {
        throw InvalidInput("default probability needs 0 <= t1 <= t2");
    }
    return survival(t1) - survival(t2);
}

SurvivalCurve::SlopeMinimum SurvivalCurve::min_decay_slope() const {
    // With x = e^{-alpha t}: g(x) = b1 x + 2 b2 x^2 + 3 b3 x^3 on [x_lo, 1].
    const auto [b1, b2, b3] = betas_;
    const auto g = [&](double x) { return x * (b1 + x * (2.0 * b2 + x * 3.0 * b3)); };
    const auto tenor_of = [&](double x) {
        return alpha_ > 0.0 ? std::clamp(-std::log(x) / alpha_, 0.0, t_max_) : 0.0;
    };
    const double x_lo = std::exp(-alpha_ * t_max_);

    SlopeMinimum best{0.0, g(1.0)};
    const auto consider = [&](double x) {
        if (x >= x_lo && x <= 1.0) {
            const double v = g(x);
            if (v < best.value) {
                best = {tenor_of(x), v};
            }
        }
    };
    consider(x_lo);
    // g'(x) = b1 + 4 b2 x + 9 b3 x^2
    const double a = 9.0 * b3;
    const double b = 4.0 * b2;
    const double c = b1;
    if (std::abs(a) < 1e-300) {
        if (std::abs(b) > 1e-300) {
            consider(-c / b);
        }
    } else {
        const double disc = b * b - 4.0 * a * c;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            const double q = -0.5 * (b + std::copysign(sq, b));
            consider(q / a);
            if (q != 0.0) {
                consider(c / q);
            }
        }
    }
    return best;
}

double zz_yield(const SurvivalCurve& surv, const DiscountCurve& disc, double t) {
    if (!(t > 0.0)) {
        throw InvalidInput("ZZ-yield requires a positive tenor");
    }
    const double q = surv.survival(t);
    if (!(q > 0.0)) {
        throw DomainError("ZZ-yield undefined where survival probability is not positive");
    }
    return -std::log(q * disc.discount(t)) / t;
}

double zz_spread(const SurvivalCurve& surv, double t) {
    if (!(t > 0.0)) {
        throw InvalidInput("ZZ-spread requires a positive tenor");
    }
    const double q = surv.survival(t);
    if (!(q > 0.0)) {
        throw DomainError("ZZ-spread undefined where survival probability is not positive");
    }
    return -std::log(q) / t;
}

SurvivalCheck check_survival_invariants(const SurvivalCurve& surv, double step) {
    SurvivalCheck check;
    check.q0_is_one = std::abs(surv.survival(0.0) - 1.0) <= 1e-12;
    check.positive_at_horizon = surv.survival(surv.t_max()) > 0.0;
    check.non_increasing = true;
    check.hazard_positive = true;
    const auto n = static_cast<int>(std::floor(surv.t_max() / step + 1e-9));
    double prev = surv.survival(0.0);
    for (int i = 0; i <= n; ++i) {
        const double t = i * step;
        const double q = surv.survival(t);
        if (i > 0 && q > prev) {
            check.non_increasing = false;
        }
        if (!(q > 0.0) || !(surv.density(t) > 0.0)) {
            check.hazard_positive = false;
        }
        prev = q;
    }
    return check;
}

} // namespace credit_curves

#pragma once

#include <array>
#include <vector>

namespace credit_curves {

/// Zero-rate pillar, continuous compounding.
struct ZeroPillar {
    double tenor = 0.0;
    double zero_rate = 0.0;
};

enum class DiscountInterpolation { LogLinearDiscount };

/// Risk-free discount function built from zero-rate pillars.
///
/// Log-discount factors are interpolated linearly between (0, 0) and the
/// pillars; past the last pillar the last zero rate is held flat.
class DiscountCurve {
public:
    explicit DiscountCurve(std::vector<ZeroPillar> pillars,
                           DiscountInterpolation rule = DiscountInterpolation::LogLinearDiscount);

    static DiscountCurve flat(double zero_rate);

    double discount(double t) const;
    double zero_rate(double t) const;

    const std::vector<ZeroPillar>& pillars() const { return pillars_; }
    DiscountInterpolation interpolation() const { return rule_; }

private:
    std::vector<ZeroPillar> pillars_;
    std::vector<double> log_discount_;
    DiscountInterpolation rule_;
};

inline constexpr double kDefaultSurvivalHorizon = 30.0;

/// Survival probability Q(t) = sum_k beta_k e^{-k alpha t}, k = 1..3.
///
/// Construction checks sum(beta) == 1 so Q(0) = 1. Monotonicity and
/// positivity are properties of fitted curves and are checked separately
/// by `monotonicity_violation` / `check_survival_invariants`.
class SurvivalCurve {
public:
    SurvivalCurve(double alpha, std::array<double, 3> betas,
                  std::vector<double> constraint_grid = {},
                  double t_max = kDefaultSurvivalHorizon);

    /// Q(t) = e^{-h t}.
    static SurvivalCurve flat_hazard(double hazard, double t_max = kDefaultSurvivalHorizon);
    /// Q(t) = 1.
    static SurvivalCurve riskless(double t_max = kDefaultSurvivalHorizon);

    double alpha() const { return alpha_; }
    const std::array<double, 3>& betas() const { return betas_; }
    const std::vector<double>& constraint_grid() const { return constraint_grid_; }
    double t_max() const { return t_max_; }

    double survival(double t) const;
    /// -dQ/dt.
    double density(double t) const;
    /// Instantaneous hazard rate -d ln Q / dt.
    double hazard(double t) const;
    /// Q(t1) - Q(t2).
    double default_prob(double t1, double t2) const;

    /// Continuous-time minimum of -dQ/dt / alpha over [0, t_max], together
    /// with the tenor where it occurs. Non-negative iff Q is non-increasing
    /// on the whole horizon.
    struct SlopeMinimum {
        double tenor = 0.0;
        double value = 0.0;
    };
    SlopeMinimum min_decay_slope() const;

private:
    double alpha_;
    std::array<double, 3> betas_;
    std::vector<double> constraint_grid_;
    double t_max_;
};

/// Tolerance on beta_1 + beta_2 + beta_3 == 1.
inline constexpr double kBetaSumTolerance = 1e-12;

double zz_yield(const SurvivalCurve& surv, const DiscountCurve& disc, double t);
/// -ln Q(T) / T: the average hazard rate over [0, T].
double zz_spread(const SurvivalCurve& surv, double t);

/// Result of checking the fitted-curve invariants on a regular grid.
struct SurvivalCheck {
    bool q0_is_one = false;
    bool non_increasing = false;
    bool hazard_positive = false;
    bool positive_at_horizon = false;

    bool ok() const { return q0_is_one && non_increasing && hazard_positive && positive_at_horizon; }
};

/// Checks Q(0) = 1, Q non-increasing and h > 0 on {0, step, 2 step, ..., t_max},
/// and Q(t_max) > 0.
SurvivalCheck check_survival_invariants(const SurvivalCurve& surv, double step = 0.25);

} // namespace credit_curves

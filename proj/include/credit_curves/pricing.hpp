#pragma once

#include "credit_curves/cashflows.hpp"
#include "credit_curves/curves.hpp"
#include "credit_curves/root_finding.hpp"

namespace credit_curves {

/// Fractional recovery of par. Accrued coupon is never recovered.
struct RecoveryAssumption {
    double principal = 0.40;
    static constexpr double coupon = 0.0;

    explicit RecoveryAssumption(double principal_recovery = 0.40);
};

// All present values below are dirty and per unit face unless noted.

/// Survival-based value with recovery paid on the payment date that ends
/// the period of default:
///   Z_N Q_N + c sum Z_i Q_i + R sum Z_i (Q_{i-1} - Q_i),  Q_0 = 1.
double pv_survival(const Schedule& sched, const DiscountCurve& disc, const SurvivalCurve& surv,
                   const RecoveryAssumption& rec);

/// Same value collected per survival probability:
///   sum_{i<N} Q_i [c Z_i - R (Z_i - Z_{i+1})] + Q_N Z_N (c + 1 - R) + R Z_1.
double pv_survival_by_survival_terms(const Schedule& sched, const DiscountCurve& disc,
                                     const SurvivalCurve& surv, const RecoveryAssumption& rec);

/// pv_survival with every term at t_i further discounted by e^{-spread t_i}.
double pv_survival_spread(const Schedule& sched, const DiscountCurve& disc, const SurvivalCurve& surv,
                          const RecoveryAssumption& rec, double spread);

/// Strippable cash-flow value: sum CF_i Z(t_i) e^{-s t_i}.
double pv_strippable(const Schedule& sched, const DiscountCurve& disc, double z_spread);

/// Clean price per 100 under the survival curve.
double fitted_clean_price(const BondQuote& bond, const DiscountCurve& disc, const SurvivalCurve& surv,
                          const RecoveryAssumption& rec);

/// Constant-coupon price per 100 of a freshly issued bond with a whole
/// number of periods to `tenor`.
double ccp(double tenor, double coupon, int frequency, const DiscountCurve& disc, const SurvivalCurve& surv,
           const RecoveryAssumption& rec);

/// Dirty market price per unit face: clean / 100 + accrued.
double dirty_price(const BondQuote& bond);

/// Continuous Z-spread reproducing the dirty market price.
double solve_zspread(const BondQuote& bond, const DiscountCurve& disc, const RootOptions& options = {});

/// OAS-to-Fit: spread on top of the survival pricer reproducing the dirty
/// market price. Positive when the bond trades below its fitted price.
double solve_oasf(const BondQuote& bond, const DiscountCurve& disc, const SurvivalCurve& surv,
                  const RecoveryAssumption& rec, const RootOptions& options = {});

/// -(1/PV) dPV/ds of the strippable value at spread s.
double spread_duration(const Schedule& sched, const DiscountCurve& disc, double z_spread);

} // namespace credit_curves

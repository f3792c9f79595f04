#include "credit_curves/pricing.hpp"

#include "credit_curves/errors.hpp"

#include <cmath>
#include <vector>

namespace credit_curves {

RecoveryAssumption::RecoveryAssumption(double principal_recovery) : principal(principal_recovery) {
    if (!(principal >= 0.0 && principal < 1.0)) {
        throw InvalidInput("principal recovery must lie in [0, 1)");
    }
}

double pv_survival_spread(const Schedule& sched, const DiscountCurve& disc, const SurvivalCurve& surv,
                          const RecoveryAssumption& rec, double spread) {
    if (sched.payment_times.empty()) {
        throw InvalidInput("empty payment schedule");
    }
    const double c = sched.coupon_amount;
    const double r = rec.principal;
    double pv = 0.0;
    double q_prev = 1.0;
    for (double t : sched.payment_times) {
        const double z = disc.discount(t) * std::exp(-spread * t);
        const double q = surv.survival(t);
        pv += c * z * q + r * z * (q_prev - q);
        q_prev = q;
    }
    const double t_n = sched.principal_time();
    pv += disc.discount(t_n) * std::exp(-spread * t_n) * q_prev;
    return pv;
}

double pv_survival(const Schedule& sched, const DiscountCurve& disc, const SurvivalCurve& surv,
                   const RecoveryAssumption& rec) {
    return pv_survival_spread(sched, disc, surv, rec, 0.0);
}

double pv_survival_by_survival_terms(const Schedule& sched, const DiscountCurve& disc,
                                     const SurvivalCurve& surv, const RecoveryAssumption& rec) {
    if (sched.payment_times.empty()) {
        throw InvalidInput("empty payment schedule");
    }
    const auto& times = sched.payment_times;
    const std::size_t n = times.size();
    const double c = sched.coupon_amount;
    const double r = rec.principal;

    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = disc.discount(times[i]);
    }
    double pv = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        pv += surv.survival(times[i]) * (c * z[i] - r * (z[i] - z[i + 1]));
    }
    pv += surv.survival(times[n - 1]) * z[n - 1] * (c + 1.0 - r);
    pv += r * z[0];
    return pv;
}

double pv_strippable(const Schedule& sched, const DiscountCurve& disc, double z_spread) {
    if (sched.payment_times.empty()) {
        throw InvalidInput("empty payment schedule");
    }
    double pv = 0.0;
    for (std::size_t i = 0; i < sched.size(); ++i) {
        const double t = sched.payment_times[i];
        pv += sched.cash_flow(i) * disc.discount(t) * std::exp(-z_spread * t);
    }
    return pv;
}

double spread_duration(const Schedule& sched, const DiscountCurve& disc, double z_spread) {
    double pv = 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < sched.size(); ++i) {
        const double t = sched.payment_times[i];
        const double v = sched.cash_flow(i) * disc.discount(t) * std::exp(-z_spread * t);
        pv += v;
        weighted += t * v;
    }
    if (!(pv > 0.0)) {
        throw DomainError("spread duration undefined for non-positive present value");
    }
    return weighted / pv;
}

double dirty_price(const BondQuote& bond) {
    return bond.clean_price / 100.0 + accrued_interest(bond);
}

double fitted_clean_price(const BondQuote& bond, const DiscountCurve& disc, const SurvivalCurve& surv,
                          const RecoveryAssumption& rec) {
    const Schedule sched = build_schedule(bond);
    return 100.0 * (pv_survival(sched, disc, surv, rec) - sched.accrued_amount);
}

double ccp(double tenor, double coupon, int frequency, const DiscountCurve& disc, const SurvivalCurve& surv,
           const RecoveryAssumption& rec) {
    const int n = whole_periods(tenor, frequency);
    const Schedule sched = build_schedule(coupon, frequency, static_cast<double>(n) / frequency);
    return 100.0 * pv_survival(sched, disc, surv, rec);
}

double solve_zspread(const BondQuote& bond, const DiscountCurve& disc, const RootOptions& options) {
    const Schedule sched = build_schedule(bond);
    const double target = bond.clean_price / 100.0 + sched.accrued_amount;
    try {
        return find_monotone_root([&](double s) { return pv_strippable(sched, disc, s) - target; }, options)
            .root;
    } catch (const UnattainablePrice& e) {
        throw UnattainablePrice("bond '" + bond.id + "': Z-spread: " + e.what());
    }
}

double solve_oasf(const BondQuote& bond, const DiscountCurve& disc, const SurvivalCurve& surv,
                  const RecoveryAssumption& rec, const RootOptions& options) {
    const Schedule sched = build_schedule(bond);
    const double target = bond.clean_price / 100.0 + sched.accrued_amount;
    try {
        return find_monotone_root(
                   [&](double s) { return pv_survival_spread(sched, disc, surv, rec, s) - target; }, options)
            .root;
    } catch (const UnattainablePrice& e) {
        throw UnattainablePrice("bond '" + bond.id + "': OAS-to-Fit: " + e.what());
    }
}

} // namespace credit_curves

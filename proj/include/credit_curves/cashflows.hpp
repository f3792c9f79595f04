#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace credit_curves {

/// Bullet bond terms with an observed clean price quoted per 100 face.
/// Coupon is an annual decimal rate; maturity is a year fraction from settlement.
struct BondQuote {
    std::string id;
    double coupon = 0.0;
    int frequency = 2;
    double maturity = 0.0;
    double clean_price = 100.0;

    void validate() const;
};

/// Payment schedule rolled backward from maturity in steps of 1/f.
/// Per unit face: every payment carries coupon_amount, the last one also the principal.
struct Schedule {
    std::vector<double> payment_times;
    double coupon_amount = 0.0;
    int frequency = 2;
    double accrued_fraction = 0.0;
    double accrued_amount = 0.0;

    std::size_t size() const { return payment_times.size(); }
    double principal_time() const { return payment_times.back(); }
    /// Contractual cash flow at payment i (coupon plus principal at the end).
    double cash_flow(std::size_t i) const {
        return coupon_amount + (i + 1 == payment_times.size() ? 1.0 : 0.0);
    }
};

/// Tolerance used to decide that maturity * f is a whole number of periods.
inline constexpr double kPeriodTolerance = 1e-9;

Schedule build_schedule(const BondQuote& bond);
/// Backward roll for an arbitrary (coupon, frequency, maturity) triple.
Schedule build_schedule(double coupon, int frequency, double maturity);

/// C * T_accrued per unit face.
double accrued_interest(const BondQuote& bond);

/// Number of whole periods in `tenor` at frequency f; throws if not integral.
int whole_periods(double tenor, int frequency);

/// Year fraction between two dates, ACT/365.25.
double year_fraction(std::chrono::sys_days from, std::chrono::sys_days to);

} // namespace credit_curves

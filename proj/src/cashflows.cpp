#include "credit_curves/cashflows.hpp"

#include "credit_curves/errors.hpp"

#include <cmath>

namespace credit_curves {

namespace {

void check_frequency(int frequency) {
    if (frequency != 1 && frequency != 2 && frequency != 4) {
        throw InvalidInput("coupon frequency must be 1, 2 or 4");
    }
}

} // namespace

void BondQuote::validate() const {
    if (!(coupon >= 0.0) || !std::isfinite(coupon)) {
        throw InvalidInput("bond '" + id + "': coupon must be non-negative");
    }
    check_frequency(frequency);
    if (!(maturity > 0.0) || !std::isfinite(maturity)) {
        throw InvalidInput("bond '" + id + "': maturity must be positive");
    }
    if (!(clean_price > 0.0) || !std::isfinite(clean_price)) {
        throw InvalidInput("bond '" + id + "': clean price must be positive");
    }
}

Schedule build_schedule(double coupon, int frequency, double maturity) {
    check_frequency(frequency);
    if (!(maturity > 0.0) || !std::isfinite(maturity)) {
        throw InvalidInput("maturity must be positive");
    }
    const double f = frequency;
    const double periods = maturity * f;
    const double nearest = std::round(periods);
    const bool whole = std::abs(periods - nearest) <= kPeriodTolerance * std::max(1.0, periods);
    const auto n = static_cast<std::size_t>(whole ? nearest : std::ceil(periods));

    Schedule s;
    s.frequency = frequency;
    s.coupon_amount = coupon / f;
    s.payment_times.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto remaining = static_cast<double>(n - 1 - i);
        s.payment_times[i] = whole ? static_cast<double>(i + 1) / f : maturity - remaining / f;
    }
    if (whole) {
        s.payment_times.back() = maturity;
    } else {
        s.accrued_fraction = 1.0 / f - s.payment_times.front();
    }
    s.accrued_amount = coupon * s.accrued_fraction;
    return s;
}

Schedule build_schedule(const BondQuote& bond) {
    bond.validate();
    return build_schedule(bond.coupon, bond.frequency, bond.maturity);
}

double accrued_interest(const BondQuote& bond) {
    return build_schedule(bond).accrued_amount;
}

int whole_periods(double tenor, int frequency) {
    check_frequency(frequency);
    const double periods = tenor * frequency;
    const double nearest = std::round(periods);
    if (!(tenor > 0.0) || std::abs(periods - nearest) > kPeriodTolerance * std::max(1.0, periods)) {
        throw InvalidInput("tenor must be a positive whole number of coupon periods");
    }
    return static_cast<int>(nearest);
}

double year_fraction(std::chrono::sys_days from, std::chrono::sys_days to) {
    return static_cast<double>((to - from).count()) / 365.25;
}

} // namespace credit_curves

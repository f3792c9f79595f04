#pragma once

#include "credit_curves/cashflows.hpp"
#include "credit_curves/curves.hpp"
#include "credit_curves/pricing.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace credit_curves {

enum class MeasureKind { Hazard, ZzSpread, ParCoupon, ParYield, PSpread, Bcds, Ccp };

std::string_view to_string(MeasureKind kind);
std::optional<MeasureKind> parse_measure_kind(std::string_view name);

/// A term structure sampled on a tenor grid. Rates and spreads are decimals;
/// CCP values are prices per 100.
struct MeasureCurve {
    MeasureKind kind = MeasureKind::Hazard;
    std::vector<double> grid;
    std::vector<double> values;
    double coupon = 0.0;
    int frequency = 2;
    double recovery = 0.0;
};

/// Semiannual tenors 0.5..10, then yearly 11..30.
std::vector<double> default_measure_grid();

/// Fitted par coupon for a whole number of periods to `tenor`.
double par_coupon(double tenor, int frequency, const DiscountCurve& disc, const SurvivalCurve& surv,
                  const RecoveryAssumption& rec);

/// Risk-free par yield f (1 - Z_N) / sum Z_i.
double par_yield(double tenor, int frequency, const DiscountCurve& disc);

/// par_coupon - par_yield.
double p_spread(double tenor, int frequency, const DiscountCurve& disc, const SurvivalCurve& surv,
                const RecoveryAssumption& rec);

/// Par CDS premium implied by the survival curve, with premium and
/// protection exchanged on a grid rolled back from `tenor` at `frequency`.
double bcds(double tenor, const DiscountCurve& disc, const SurvivalCurve& surv, double recovery,
            int frequency = 4);

/// Coupon at which the bond's fitted clean price is exactly par, given its
/// accrual. Throws DomainError when the denominator is not positive.
double fitted_par_coupon(const BondQuote& bond, const DiscountCurve& disc, const SurvivalCurve& surv,
                         const RecoveryAssumption& rec);

struct PSpreadBreakdown {
    double fitted_par_coupon = 0.0;
    double par_yield = 0.0;
    /// fitted_par_coupon - par_yield.
    double fair = 0.0;
    double oasf = 0.0;
    /// fair + oasf.
    double market = 0.0;
};

/// Fair and market P-spreads of a bond. The par yield uses the bond's
/// maturity on its own payment grid.
PSpreadBreakdown market_p_spread(const BondQuote& bond, const DiscountCurve& disc, const SurvivalCurve& surv,
                                 const RecoveryAssumption& rec);

MeasureCurve ccp_curve(double coupon, int frequency, const std::vector<double>& grid, const DiscountCurve& disc,
                       const SurvivalCurve& surv, const RecoveryAssumption& rec);

struct MeasureRequest {
    MeasureKind kind = MeasureKind::Hazard;
    std::vector<double> grid = default_measure_grid();
    int frequency = 2;
    /// Coupon level for CCP curves.
    double coupon = 0.0;
    /// BCDS recovery; defaults to the bond recovery.
    std::optional<double> cds_recovery;
};

MeasureCurve sample_measure(const MeasureRequest& request, const DiscountCurve& disc, const SurvivalCurve& surv,
                            const RecoveryAssumption& rec);

} // namespace credit_curves

#include "credit_curves/measures.hpp"

#include "credit_curves/errors.hpp"

#include <array>
#include <utility>

namespace credit_curves {

namespace {

constexpr std::array<std::pair<MeasureKind, std::string_view>, 7> kKindNames{{
    {MeasureKind::Hazard, "hazard"},
    {MeasureKind::ZzSpread, "zz_spread"},
    {MeasureKind::ParCoupon, "par_coupon"},
    {MeasureKind::ParYield, "par_yield"},
    {MeasureKind::PSpread, "p_spread"},
    {MeasureKind::Bcds, "bcds"},
    {MeasureKind::Ccp, "ccp"},
}};

/// Sums over a payment grid that the par formulas share.
struct SurvivalSums {
    double annuity = 0.0;       // sum Q_i Z_i
    double protection = 0.0;    // sum (Q_{i-1} - Q_i) Z_i
    double final_survival = 0.0; // Q_N Z_N
};

SurvivalSums survival_sums(const std::vector<double>& times, const DiscountCurve& disc, const SurvivalCurve& surv) {
    SurvivalSums s;
    double q_prev = 1.0;
    double z = 1.0;
    double q = 1.0;
    for (double t : times) {
        z = disc.discount(t);
        q = surv.survival(t);
        s.annuity += q * z;
        s.protection += (q_prev - q) * z;
        q_prev = q;
    }
    s.final_survival = q * z;
    return s;
}

std::vector<double> period_grid(double tenor, int frequency) {
    const int n = whole_periods(tenor, frequency);
    return build_schedule(0.0, frequency, static_cast<double>(n) / frequency).payment_times;
}

} // namespace

std::string_view to_string(MeasureKind kind) {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) {
            return name;
        }
    }
    return "unknown";
}

std::optional<MeasureKind> parse_measure_kind(std::string_view name) {
    for (const auto& [k, n] : kKindNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

std::vector<double> default_measure_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 20; ++i) {
        grid.push_back(0.5 * i);
    }
    for (int y = 11; y <= 30; ++y) {
        grid.push_back(y);
    }
    return grid;
}

double par_coupon(double tenor, int frequency, const DiscountCurve& disc, const SurvivalCurve& surv,
                  const RecoveryAssumption& rec) {
    const auto s = survival_sums(period_grid(tenor, frequency), disc, surv);
    return frequency * (1.0 - s.final_survival - rec.principal * s.protection) / s.annuity;
}

double par_yield(double tenor, int frequency, const DiscountCurve& disc) {
    const auto times = period_grid(tenor, frequency);
    double annuity = 0.0;
    for (double t : times) {
        annuity += disc.discount(t);
    }
    return frequency * (1.0 - disc.discount(times.back())) / annuity;
}

double p_spread(double tenor, int frequency, const DiscountCurve& disc, const SurvivalCurve& surv,
                const RecoveryAssumption& rec) {
    return par_coupon(tenor, frequency, disc, surv, rec) - par_yield(tenor, frequency, disc);
}

double bcds(double tenor, const DiscountCurve& disc, const SurvivalCurve& surv, double recovery, int frequency) {
    if (!(tenor > 0.0)) {
        throw InvalidInput("CDS tenor must be positive");
    }
    if (!(recovery >= 0.0 && recovery < 1.0)) {
        throw InvalidInput("CDS recovery must lie in [0, 1)");
    }
    const auto times = build_schedule(0.0, frequency, tenor).payment_times;
    const auto s = survival_sums(times, disc, surv);
    return frequency * (1.0 - recovery) * s.protection / s.annuity;
}

double fitted_par_coupon(const BondQuote& bond, const DiscountCurve& disc, const SurvivalCurve& surv,
                         const RecoveryAssumption& rec) {
    const Schedule sched = build_schedule(bond);
    const auto s = survival_sums(sched.payment_times, disc, surv);
    const double denom = s.annuity / sched.frequency - sched.accrued_fraction;
    if (!(denom > 0.0)) {
        throw DomainError("bond '" + bond.id + "': fitted par coupon undefined (non-positive annuity net of accrual)");
    }
    return (1.0 - s.final_survival - rec.principal * s.protection) / denom;
}

PSpreadBreakdown market_p_spread(const BondQuote& bond, const DiscountCurve& disc, const SurvivalCurve& surv,
                                 const RecoveryAssumption& rec) {
    PSpreadBreakdown out;
    out.fitted_par_coupon = fitted_par_coupon(bond, disc, surv, rec);
    out.par_yield = fitted_par_coupon(bond, disc, SurvivalCurve::riskless(surv.t_max()), rec);
    out.fair = out.fitted_par_coupon - out.par_yield;
    out.oasf = solve_oasf(bond, disc, surv, rec);
    out.market = out.fair + out.oasf;
    return out;
}

MeasureCurve ccp_curve(double coupon, int frequency, const std::vector<double>& grid, const DiscountCurve& disc,
                       const SurvivalCurve& surv, const RecoveryAssumption& rec) {
    MeasureRequest request;
    request.kind = MeasureKind::Ccp;
    request.grid = grid;
    request.frequency = frequency;
    request.coupon = coupon;
    return sample_measure(request, disc, surv, rec);
}

MeasureCurve sample_measure(const MeasureRequest& request, const DiscountCurve& disc, const SurvivalCurve& surv,
                            const RecoveryAssumption& rec) {
    for (std::size_t i = 1; i < request.grid.size(); ++i) {
        if (!(request.grid[i] > request.grid[i - 1])) {
            throw InvalidInput("measure grid must be strictly increasing");
        }
    }
    MeasureCurve curve;
    curve.kind = request.kind;
    curve.grid = request.grid;
    curve.frequency = request.kind == MeasureKind::Bcds ? 4 : request.frequency;
    curve.coupon = request.kind == MeasureKind::Ccp ? request.coupon : 0.0;
    curve.recovery = request.kind == MeasureKind::Bcds ? request.cds_recovery.value_or(rec.principal) : rec.principal;
    curve.values.reserve(request.grid.size());
    for (double t : request.grid) {
        double v = 0.0;
        switch (request.kind) {
        case MeasureKind::Hazard:
            v = surv.hazard(t);
            break;
        case MeasureKind::ZzSpread:
            v = zz_spread(surv, t);
            break;
        case MeasureKind::ParCoupon:
            v = par_coupon(t, request.frequency, disc, surv, rec);
            break;
        case MeasureKind::ParYield:
            v = par_yield(t, request.frequency, disc);
            break;
        case MeasureKind::PSpread:
            v = p_spread(t, request.frequency, disc, surv, rec);
            break;
        case MeasureKind::Bcds:
            v = bcds(t, disc, surv, curve.recovery);
            break;
        case MeasureKind::Ccp:
            v = ccp(t, request.coupon, request.frequency, disc, surv, rec);
            break;
        }
        curve.values.push_back(v);
    }
    return curve;
}

} // namespace credit_curves

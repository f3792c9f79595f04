#include "credit_curves/cli.hpp"
#include "credit_curves/errors.hpp"
#include "credit_curves/fitting.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace credit_curves;

namespace {

const RecoveryAssumption kRec40{0.40};

std::vector<BondQuote> noiseless(double alpha, std::array<double, 3> betas, const DiscountCurve& disc,
                                 std::vector<cli::BondTemplate> templates = cli::default_templates()) {
    cli::UniverseSpec spec;
    spec.alpha = alpha;
    spec.betas = betas;
    spec.templates = std::move(templates);
    return cli::gen_universe(spec, disc);
}

double max_curve_error(const SurvivalCurve& a, const SurvivalCurve& b) {
    double worst = 0.0;
    for (double t = 0.25; t <= 30.0 + 1e-9; t += 0.25) {
        worst = std::max(worst, std::abs(a.survival(t) - b.survival(t)));
    }
    return worst;
}

} // namespace

TEST(Regressors, ZeroCouponZeroRecovery) {
    const auto disc = DiscountCurve::flat(0.04);
    const std::vector<BondQuote> u{{"a", 0.0, 2, 3.0, 80.0}, {"b", 0.0, 2, 7.0, 60.0}, {"c", 0.0, 2, 12.0, 40.0}};
    const auto p = build_regressors(u, disc, 0.05, RecoveryAssumption(0.0));
    for (std::size_t q = 0; q < u.size(); ++q) {
        const double t = u[q].maturity;
        for (int k = 0; k < 3; ++k) {
            EXPECT_NEAR(p.regressors[q][k], std::exp(-(k + 1) * 0.05 * t) * disc.discount(t), 1e-15);
        }
        EXPECT_NEAR(p.adjusted_pv[q], u[q].clean_price / 100.0, 1e-15);
    }
}

TEST(Regressors, TermByTermAccumulation) {
    const auto disc = DiscountCurve::flat(0.04);
    const double alpha = 0.05;
    const double rec = 0.4;
    const double c = 0.025;
    const std::vector<BondQuote> u{{"a", 0.05, 2, 2.0, 97.0}, {"b", 0.05, 2, 3.0, 95.0}, {"c", 0.05, 2, 4.0, 93.0}};
    const auto p = build_regressors(u, disc, alpha, RecoveryAssumption(rec));
    const double times[] = {0.5, 1.0, 1.5, 2.0};
    for (int k = 1; k <= 3; ++k) {
        double acc = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double s = std::exp(-k * alpha * times[i]);
            const double z = std::exp(-0.04 * times[i]);
            if (i < 3) {
                const double z_next = std::exp(-0.04 * times[i + 1]);
                acc += s * (c * z - rec * (z - z_next));
            } else {
                acc += s * z * (c + 1.0 - rec);
            }
        }
        EXPECT_NEAR(p.regressors[0][k - 1], acc, 1e-14);
    }
    EXPECT_NEAR(p.adjusted_pv[0], 0.97 - rec * std::exp(-0.02), 1e-15);
}

TEST(Regressors, NoiselessPricesSatisfyLinearModel) {
    const auto disc = DiscountCurve::flat(0.04);
    const std::array<double, 3> beta{0.5, 0.3, 0.2};
    const auto u = noiseless(0.05, beta, disc);
    const auto p = build_regressors(u, disc, 0.05, kRec40);
    for (std::size_t q = 0; q < u.size(); ++q) {
        const double ub = p.regressors[q][0] * beta[0] + p.regressors[q][1] * beta[1] + p.regressors[q][2] * beta[2];
        EXPECT_NEAR(ub, p.adjusted_pv[q], 1e-12);
    }
}

TEST(BaseWeights, ZeroCouponDurations) {
    const auto disc = DiscountCurve::flat(0.04);
    const std::vector<BondQuote> u{{"a", 0.0, 2, 5.0, 70.0}, {"b", 0.0, 2, 2.0, 85.0}, {"c", 0.0, 2, 10.0, 50.0}};
    const auto w = base_weights(u, disc);
    EXPECT_NEAR(w[0], 1.0 / 25.0, 1e-12);
    EXPECT_NEAR(w[1] / w[2], 25.0, 1e-9);
}

TEST(ConstrainedWls, RecoversGeneratingBetas) {
    const auto disc = DiscountCurve::flat(0.04);
    const auto u = noiseless(0.05, {0.5, 0.3, 0.2}, disc);
    const auto p = build_regressors(u, disc, 0.05, kRec40, default_constraint_tenors(), 30.0, base_weights(u, disc));
    const auto sol = solve_constrained_wls(p);
    EXPECT_NEAR(sol.betas[0], 0.5, 1e-8);
    EXPECT_NEAR(sol.betas[1], 0.3, 1e-8);
    EXPECT_NEAR(sol.betas[2], 0.2, 1e-8);
    EXPECT_TRUE(sol.active.empty());
}

TEST(ConstrainedWls, SingleExponential) {
    const auto disc = DiscountCurve::flat(0.03);
    const auto u = noiseless(0.04, {1.0, 0.0, 0.0}, disc);
    const auto p = build_regressors(u, disc, 0.04, kRec40, default_constraint_tenors(), 30.0, base_weights(u, disc));
    const auto sol = solve_constrained_wls(p);
    EXPECT_NEAR(sol.betas[0], 1.0, 1e-8);
    EXPECT_NEAR(sol.betas[1], 0.0, 1e-8);
    EXPECT_NEAR(sol.betas[2], 0.0, 1e-8);
}

TEST(ConstrainedWls, ActiveSetHandlesRisingData) {
    const auto disc = DiscountCurve::flat(0.04);
    auto u = noiseless(0.05, {0.5, 0.3, 0.2}, disc);
    // Long bonds priced above their riskless value imply Q increasing with tenor.
    for (auto& b : u) {
        if (b.maturity > 15.0) {
            const auto s = build_schedule(b);
            b.clean_price = 100.0 * (pv_strippable(s, disc, 0.0) - s.accrued_amount) + 5.0;
        }
    }
    FitConfig config;
    try {
        const auto fit = fit_survival(u, disc, config);
        EXPECT_TRUE(check_survival_invariants(fit.curve).ok());
        EXPECT_GE(fit.curve.min_decay_slope().value, -1e-9);
        EXPECT_FALSE(fit.active_constraints.empty());
    } catch (const InfeasibleFit&) {
        SUCCEED();
    }
}

TEST(ConstrainedWls, RejectsTooFewBonds) {
    const auto disc = DiscountCurve::flat(0.04);
    const std::vector<BondQuote> u{{"a", 0.05, 2, 5.0, 90.0}, {"b", 0.05, 2, 10.0, 85.0}};
    EXPECT_THROW(fit_survival(u, disc), InvalidInput);
}

TEST(Reweight, EqualResidualsGetUnitWeights) {
    const std::vector<double> r(12, 0.37);
    const std::vector<double> w(12, 0.01);
    for (double x : reweight_outliers(r, w)) {
        EXPECT_EQ(x, 1.0);
    }
}

TEST(Reweight, BisquareOfScaledResiduals) {
    const std::vector<double> r{-0.2, 0.1, 0.0, 0.15, -0.05, 0.05, 3.0};
    const std::vector<double> w(r.size(), 1.0);
    const auto out = reweight_outliers(r, w);
    EXPECT_EQ(out.back(), kOutlierWeightFloor);
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        EXPECT_GT(out[i], 0.5);
        EXPECT_LE(out[i], 1.0);
    }
}

TEST(Reweight, OneMispricedBondOfTwenty) {
    const auto disc = DiscountCurve::flat(0.04);
    const std::array<double, 3> truth{0.5, 0.3, 0.2};
    auto templates = cli::default_templates();
    templates.resize(20);
    auto u = noiseless(0.05, truth, disc, templates);
    u[9].clean_price -= 10.0;
    FitConfig config;
    config.alpha_grid = {0.05};
    const auto fit = fit_survival(u, disc, config);
    EXPECT_LT(fit.outlier_weights[9], 0.5);
    for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(fit.curve.betas()[k], truth[k], 1e-3);
    }
}

TEST(Reweight, ZeroResidualsConvergeInOnePass) {
    const auto disc = DiscountCurve::flat(0.04);
    const auto u = noiseless(0.05, {0.5, 0.3, 0.2}, disc);
    FitConfig config;
    config.alpha_grid = {0.05};
    const auto fit = fit_survival(u, disc, config);
    EXPECT_EQ(fit.iterations, 1);
    for (double w : fit.outlier_weights) {
        EXPECT_EQ(w, 1.0);
    }
}

TEST(FitSurvival, NoiselessRoundTrip) {
    const DiscountCurve disc({{1.0, 0.02}, {5.0, 0.035}, {30.0, 0.05}});
    const SurvivalCurve truth(0.05, {0.5, 0.3, 0.2});
    const auto u = noiseless(0.05, truth.betas(), disc);
    const auto fit = fit_survival(u, disc);
    EXPECT_NEAR(fit.curve.alpha(), 0.05, 1e-12);
    for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(fit.curve.betas()[k], truth.betas()[k], 1e-6);
    }
    EXPECT_LT(fit.wape, 1e-8);
    EXPECT_LT(max_curve_error(fit.curve, truth), 1e-6);
    for (double r : fit.residuals) {
        EXPECT_LT(std::abs(r), 1e-8);
    }
}

TEST(FitSurvival, RisklessZeroCouponUniverse) {
    const auto disc = DiscountCurve::flat(0.04);
    std::vector<BondQuote> u;
    for (int t = 1; t <= 30; ++t) {
        u.push_back({"Z" + std::to_string(t), 0.0, 2, static_cast<double>(t), 100.0 * disc.discount(t)});
    }
    FitConfig config;
    config.alpha_grid = {1e-4, 0.01, 0.05, 0.1};
    const auto fit = fit_survival(u, disc, config);
    for (double t = 0.25; t <= 30.0; t += 0.25) {
        EXPECT_NEAR(fit.curve.survival(t), 1.0, 1e-6);
    }
}

TEST(FitSurvival, NoisyUniverseWapeTracksNoise) {
    const auto disc = DiscountCurve::flat(0.04);
    int bound = 0;
    double total = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        cli::UniverseSpec spec;
        spec.alpha = 0.03;
        spec.betas = {0.7, 0.2, 0.1};
        spec.noise = 1.0;
        spec.seed = seed;
        const auto fit = fit_survival(cli::gen_universe(spec, disc), disc);
        EXPECT_GE(fit.wape, 0.1) << "seed " << seed;
        EXPECT_LE(fit.wape, 10.0) << "seed " << seed;
        total += fit.wape;
        bound += fit.active_constraints.empty() ? 0 : 1;
    }
    EXPECT_GE(total / 100.0, 0.5);
    EXPECT_LE(total / 100.0, 2.0);
    EXPECT_EQ(bound, 0);
}

TEST(FitSurvival, ThreadCountDoesNotChangeResult) {
    const auto disc = DiscountCurve::flat(0.04);
    cli::UniverseSpec spec;
    spec.noise = 0.5;
    const auto u = cli::gen_universe(spec, disc);
    FitConfig one;
    one.threads = 1;
    FitConfig many;
    many.threads = 8;
    const auto a = fit_survival(u, disc, one);
    const auto b = fit_survival(u, disc, many);
    EXPECT_EQ(a.curve.alpha(), b.curve.alpha());
    EXPECT_EQ(a.curve.betas(), b.curve.betas());
    EXPECT_EQ(a.residuals, b.residuals);
}

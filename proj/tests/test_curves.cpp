#include "credit_curves/curves.hpp"
#include "credit_curves/errors.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace credit_curves;

TEST(DiscountCurve, FlatClosedForm) {
    const auto disc = DiscountCurve::flat(0.04);
    EXPECT_DOUBLE_EQ(disc.discount(0.0), 1.0);
    EXPECT_NEAR(disc.discount(5.0), 0.8187307530779818, 1e-15);
    EXPECT_NEAR(disc.zero_rate(12.3), 0.04, 1e-15);
}

TEST(DiscountCurve, LogLinearBetweenPillars) {
    const DiscountCurve disc({{1.0, 0.03}, {2.0, 0.05}});
    EXPECT_NEAR(disc.discount(1.5), std::exp(-0.065), 1e-15);
    EXPECT_NEAR(disc.discount(0.5), std::exp(-0.015), 1e-15);
    // Flat zero rate beyond the last pillar.
    EXPECT_NEAR(disc.discount(4.0), std::exp(-0.20), 1e-15);
}

TEST(DiscountCurve, RejectsBadInput) {
    EXPECT_THROW(DiscountCurve({}), InvalidInput);
    EXPECT_THROW(DiscountCurve({{2.0, 0.03}, {1.0, 0.03}}), InvalidInput);
    EXPECT_THROW(DiscountCurve::flat(0.03).discount(-1.0), InvalidInput);
}

TEST(SurvivalCurve, Examples) {
    const SurvivalCurve single(0.02, {1.0, 0.0, 0.0});
    EXPECT_NEAR(single.survival(10.0), std::exp(-0.2), 1e-15);
    const SurvivalCurve mixed(0.05, {0.5, 0.3, 0.2});
    EXPECT_DOUBLE_EQ(mixed.survival(0.0), 1.0);
    const double expected = 0.5 * std::exp(-0.25) + 0.3 * std::exp(-0.5) + 0.2 * std::exp(-0.75);
    EXPECT_NEAR(mixed.survival(5.0), expected, 1e-15);
    EXPECT_NEAR(mixed.survival(5.0), 0.665833, 1e-6);
}

TEST(SurvivalCurve, BetasMustSumToOne) {
    EXPECT_THROW(SurvivalCurve(0.05, {0.5, 0.3, 0.3}), InvalidInput);
    EXPECT_THROW(SurvivalCurve(-0.05, {1.0, 0.0, 0.0}), InvalidInput);
}

TEST(SurvivalCurve, DefaultProbability) {
    const SurvivalCurve c(0.02, {1.0, 0.0, 0.0});
    EXPECT_EQ(c.default_prob(3.0, 3.0), 0.0);
    EXPECT_NEAR(c.default_prob(0.0, 1e6), 1.0, 1e-15);
    EXPECT_NEAR(c.default_prob(1.0, 2.0), std::exp(-0.02) - std::exp(-0.04), 1e-15);
    EXPECT_NEAR(c.default_prob(1.0, 2.0), 0.0194092, 1e-7);
    EXPECT_THROW(c.default_prob(2.0, 1.0), InvalidInput);
}

TEST(SurvivalCurve, HazardExamples) {
    const SurvivalCurve flat(0.03, {1.0, 0.0, 0.0});
    for (double t : {0.0, 1.0, 7.5, 29.0}) {
        EXPECT_NEAR(flat.hazard(t), 0.03, 1e-15);
    }
    const SurvivalCurve c(0.05, {0.5, 0.3, 0.2});
    EXPECT_NEAR(c.hazard(0.0), 0.05 * (0.5 + 0.6 + 0.6), 1e-15);
    const double fd = -oracles::central_difference([&](double t) { return std::log(c.survival(t)); }, 5.0, 1e-6);
    EXPECT_NEAR(c.hazard(5.0), fd, 1e-6);
    const double e1 = std::exp(-0.25);
    const double num = 0.05 * (0.5 * e1 + 0.6 * e1 * e1 + 0.6 * e1 * e1 * e1);
    EXPECT_NEAR(c.hazard(5.0), num / c.survival(5.0), 1e-15);
    EXPECT_NEAR(c.hazard(5.0), 0.07785, 1e-5);
}

TEST(SurvivalCurve, HazardUndefinedWhereQIsNotPositive) {
    const SurvivalCurve c(0.1, {-1.0, 2.0, 0.0});
    EXPECT_LT(c.survival(20.0), 0.0);
    EXPECT_THROW(c.hazard(20.0), DomainError);
}

TEST(ZzMeasures, Examples) {
    const auto flat4 = DiscountCurve::flat(0.04);
    EXPECT_NEAR(zz_yield(SurvivalCurve::riskless(), flat4, 5.0), 0.04, 1e-15);
    EXPECT_NEAR(zz_yield(SurvivalCurve::flat_hazard(0.02), flat4, 5.0), 0.06, 1e-15);
    const SurvivalCurve c(0.05, {0.5, 0.3, 0.2});
    EXPECT_NEAR(zz_yield(c, DiscountCurve::flat(0.03), 10.0), -0.1 * std::log(c.survival(10.0) * std::exp(-0.3)),
                1e-15);

    for (double t : {0.5, 3.0, 25.0}) {
        EXPECT_NEAR(zz_spread(SurvivalCurve::flat_hazard(0.02), t), 0.02, 1e-15);
        EXPECT_EQ(zz_spread(SurvivalCurve::riskless(), t), 0.0);
    }
    EXPECT_NEAR(zz_spread(c, 5.0), -0.2 * std::log(c.survival(5.0)), 1e-15);
    EXPECT_NEAR(zz_spread(c, 5.0), 0.0813, 1e-4);
}

TEST(ZzMeasures, SpreadIsAverageHazardByQuadrature) {
    const SurvivalCurve c(0.05, {0.5, 0.3, 0.2});
    for (double t : {1.0, 5.0, 12.0, 30.0}) {
        const double avg = oracles::integrate([&](double s) { return c.hazard(s); }, 0.0, t) / t;
        EXPECT_NEAR(zz_spread(c, t), avg, 1e-8);
    }
}

TEST(SurvivalInvariants, RandomPositiveMixturesPass) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double b1 = u(rng);
        const double b2 = (1.0 - b1) * u(rng);
        const SurvivalCurve c(0.01 + 0.29 * u(rng), {b1, b2, 1.0 - b1 - b2});
        const auto check = check_survival_invariants(c);
        EXPECT_TRUE(check.ok());
        EXPECT_GE(c.min_decay_slope().value, 0.0);
        for (double t = 0.0; t < 30.0; t += 0.25) {
            EXPECT_GE(c.survival(t), c.survival(t + 0.25));
        }
    }
}

TEST(SurvivalInvariants, DetectsIncreasingCurve) {
    const SurvivalCurve rising(0.1, {-0.5, 1.5, 0.0});
    const auto check = check_survival_invariants(rising);
    EXPECT_TRUE(check.q0_is_one);
    EXPECT_FALSE(check.non_increasing);
    EXPECT_FALSE(check.ok());
    EXPECT_LT(rising.min_decay_slope().value, 0.0);
}

TEST(SurvivalInvariants, MinDecaySlopeMatchesDenseScan) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double b1 = u(rng);
        const double b2 = u(rng);
        const SurvivalCurve c(0.08, {b1, b2, 1.0 - b1 - b2});
        double scan = 1e300;
        for (int i = 0; i <= 30000; ++i) {
            scan = std::min(scan, c.density(i * 1e-3) / c.alpha());
        }
        EXPECT_NEAR(c.min_decay_slope().value, scan, 1e-6);
    }
}

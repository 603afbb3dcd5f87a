#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "ewgame/bank.hpp"
#include "ewgame/errors.hpp"
#include "ewgame/oracles.hpp"

namespace ewgame {
namespace {

using bank::BankAction;
using bank::BankParams;
using bank::CreditDistribution;

int sign(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

CreditDistribution uniform_for(const BankParams& p) {
    return CreditDistribution::piecewise_uniform(p.tau_l, p.tau_h - p.tau_l, p.tau_l, p.tau_h);
}

TEST(HIntegral, EmptyIntervalIsZero) {
    const CreditDistribution d = CreditDistribution::truncated_gaussian(0.4, 0.2);
    EXPECT_EQ(bank::h_integral(d, 0.5, 0.3, 0.3), 0.0);
}

TEST(HIntegral, UniformDensityHandValue) {
    const BankParams p = BankParams::from_rates(0.4, 0.8);
    const CreditDistribution u = uniform_for(p);
    EXPECT_NEAR(u.density(0.1), 1.0, 1e-15);
    EXPECT_NEAR(u.density(0.9), 1.0, 1e-15);
    EXPECT_NEAR(bank::h_integral(u, 0.4, 0.0, 1.0), 0.2, 1e-15);
}

TEST(HIntegral, RejectsBadRange) {
    const CreditDistribution d = CreditDistribution::truncated_gaussian(0.4, 0.2);
    EXPECT_THROW(bank::h_integral(d, 0.5, 0.6, 0.3), InvalidRange);
    EXPECT_THROW(bank::h_integral(d, 0.5, -0.1, 0.3), InvalidRange);
}

TEST(HIntegral, IsAdditiveOverIntervals) {
    for (const CreditDistribution& d :
         {CreditDistribution::truncated_gaussian(0.3, 0.1), CreditDistribution::truncated_gaussian(0.1, 0.3),
          CreditDistribution::piecewise_uniform(0.01, 0.95, 0.3, 0.4)}) {
        for (double m : {0.1, 0.35, 0.77}) {
            const double whole = bank::h_integral(d, 0.6, 0.05, 0.9);
            const double split = bank::h_integral(d, 0.6, 0.05, m) + bank::h_integral(d, 0.6, m, 0.9);
            EXPECT_NEAR(whole, split, 1e-14);
        }
    }
}

TEST(HIntegral, ClosedFormMatchesQuadrature) {
    for (const CreditDistribution& d :
         {CreditDistribution::truncated_gaussian(0.3, 0.1), CreditDistribution::truncated_gaussian(0.1, 0.3),
          CreditDistribution::truncated_gaussian(0.1, 0.2), CreditDistribution::truncated_gaussian(0.5, 0.05),
          CreditDistribution::piecewise_uniform(0.01, 0.95, 0.3, 0.4)}) {
        for (double g : {0.4, 0.6, 0.8}) {
            for (auto [a, b] : {std::pair{0.0, 1.0}, std::pair{0.25, 0.75}, std::pair{0.3571, 1.0}}) {
                EXPECT_NEAR(bank::h_integral(d, g, a, b), verify::h_integral_quadrature(d, g, a, b), 1e-8)
                    << d.describe();
            }
        }
    }
}

TEST(Distribution, DensityIntegratesToOne) {
    for (const CreditDistribution& d :
         {CreditDistribution::truncated_gaussian(0.3, 0.1), CreditDistribution::piecewise_uniform(0.2, 0.5, 0.3, 0.6)}) {
        const double mass = verify::adaptive_simpson([&](double y) { return d.density(y); }, 0.0, 0.3, 1e-13) +
                            verify::adaptive_simpson([&](double y) { return d.density(y); }, 0.3, 0.6, 1e-13) +
                            verify::adaptive_simpson([&](double y) { return d.density(y); }, 0.6, 1.0, 1e-13);
        EXPECT_NEAR(mass, 1.0, 1e-9);
    }
    EXPECT_THROW(CreditDistribution::truncated_gaussian(0.5, 0.0), InvalidParameter);
    EXPECT_THROW(CreditDistribution::piecewise_uniform(0.7, 0.5, 0.3, 0.6), InvalidParameter);
}

TEST(BankParams, ThresholdRules) {
    const BankParams r = BankParams::from_rates(0.4, 0.8);
    EXPECT_DOUBLE_EQ(r.tau_l, 1.0 / 2.8);
    EXPECT_DOUBLE_EQ(r.tau_h, 1.0 / 2.4);
    const BankParams q = BankParams::from_rates(0.4, 0.8, bank::ThresholdRule::Reciprocal);
    EXPECT_DOUBLE_EQ(q.tau_l, 1.0 / 1.8);
    EXPECT_DOUBLE_EQ(q.tau_h, 1.0 / 1.4);
    EXPECT_THROW(BankParams::from_rates(0.8, 0.4), InvalidParameter);
    EXPECT_EQ(bank::parse_threshold_rule("reciprocal"), bank::ThresholdRule::Reciprocal);
    EXPECT_THROW(bank::parse_threshold_rule("other"), ParseError);
}

TEST(UtilityMatrix, LosingToLowerRateEarnsNothing) {
    const auto m = bank::utility_matrix_4x4(CreditDistribution::truncated_gaussian(0.3, 0.1),
                                            BankParams::from_rates(0.4, 0.8));
    EXPECT_EQ(m[static_cast<int>(BankAction::LowTauHighRate)][static_cast<int>(BankAction::LowTauLowRate)], 0.0);
}

TEST(UtilityMatrix, MatchesMonteCarloOracle) {
    const CreditDistribution d = CreditDistribution::truncated_gaussian(0.3, 0.1);
    const BankParams p = BankParams::from_rates(0.4, 0.8);
    const auto m = bank::utility_matrix_4x4(d, p);
    const verify::MonteCarloTable mc = verify::monte_carlo_utility_table(d, p, 400'000, 17);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const double se = mc.std_error[i][j];
            EXPECT_LE(std::abs(mc.mean[i][j] - m[i][j]), std::max(4.5 * se, 1e-12)) << i << "," << j;
        }
    }
}

TEST(Dominance, UniformDensityAllStrict) {
    const BankParams p = BankParams::from_rates(0.4, 0.8);
    const bank::DominanceReport r = bank::dominance_check(uniform_for(p), p);
    EXPECT_FALSE(r.inequalities.empty());
    EXPECT_TRUE(r.all_hold());
    EXPECT_TRUE(r.all_strict());
}

TEST(Reduction, SignRegimesOfReferenceConfigs) {
    const BankParams r48 = BankParams::from_rates(0.4, 0.8);
    const BankParams r67 = BankParams::from_rates(0.6, 0.7);
    struct Case {
        CreditDistribution dist;
        BankParams params;
        int s1, s2;
    };
    const Case cases[] = {
        {CreditDistribution::truncated_gaussian(0.3, 0.1), r48, 1, 1},
        {CreditDistribution::truncated_gaussian(0.1, 0.3), r48, -1, -1},
        {CreditDistribution::truncated_gaussian(0.1, 0.2), r48, 1, -1},
        {CreditDistribution::piecewise_uniform(0.01, 0.95, r67.tau_l, r67.tau_h), r67, -1, 1},
    };
    for (const Case& c : cases) {
        const SymmetricGame g = bank::reduce_to_2x2(c.dist, c.params);
        EXPECT_EQ(sign(g.eps1()), c.s1) << c.dist.describe();
        EXPECT_EQ(sign(g.eps2()), c.s2) << c.dist.describe();
    }
}

TEST(Experiment, NegNegConfigConvergesToHighThresholdLowRate) {
    const BankParams p = BankParams::from_rates(0.4, 0.8);
    const bank::BankExperiment ex =
        bank::run_bank_experiment(CreditDistribution::truncated_gaussian(0.1, 0.3), p, {0.1, 0.5, 0.3, 0.1},
                                  {0.1, 0.3, 0.5, 0.1}, 0.1, 300'000, false);
    EXPECT_EQ(ex.limit1, BankAction::HighTauLowRate);
    EXPECT_EQ(ex.limit2, BankAction::HighTauLowRate);
    EXPECT_LT(ex.dominated_weight, 1e-10);
    EXPECT_NEAR(std::accumulate(ex.final1.begin(), ex.final1.end(), 0.0), 1.0, 1e-12);
}

TEST(Experiment, LogWeightNormalizationIsStable) {
    const bank::Weights w = bank::normalize_log_weights({-1000.0, -1001.0, -5000.0, -1000.0});
    EXPECT_NEAR(w[0] + w[1] + w[2] + w[3], 1.0, 1e-15);
    EXPECT_EQ(w[2], 0.0);
    EXPECT_DOUBLE_EQ(w[0], w[3]);
}

}  // namespace
}  // namespace ewgame

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "ewgame/errors.hpp"
#include "ewgame/game.hpp"
#include "ewgame/rng.hpp"

namespace ewgame {
namespace {

TEST(SymmetricGame, EpsilonsAreDirectDifferences) {
    const SymmetricGame g(3, 1, 2, 5);
    const auto [e1, e2] = epsilon_params(g);
    EXPECT_EQ(e1, 2.0);
    EXPECT_EQ(e2, -3.0);
    EXPECT_EQ(g.sign_regime(), SignRegime::PosNeg);
}

TEST(SymmetricGame, IdenticalEntriesAreDegenerate) {
    const SymmetricGame g(1, 1, 1, 1);
    EXPECT_TRUE(g.is_degenerate());
    EXPECT_EQ(g.sign_regime(), SignRegime::Degenerate);
    EXPECT_THROW(g.require_nondegenerate(), DegenerateGame);
}

TEST(SymmetricGame, SignRegimeCoversEveryRow) {
    EXPECT_EQ(SymmetricGame(0, 1, 1, 0).sign_regime(), SignRegime::NegPos);
    EXPECT_EQ(SymmetricGame::from_epsilons(-2, -1).sign_regime(), SignRegime::NegNeg);
    EXPECT_EQ(SymmetricGame::from_epsilons(1, 2).sign_regime(), SignRegime::PosPos);
    EXPECT_EQ(SymmetricGame::from_epsilons(0, -1).sign_regime(), SignRegime::ZeroNeg);
    EXPECT_EQ(SymmetricGame::from_epsilons(0, 2).sign_regime(), SignRegime::ZeroPos);
    EXPECT_EQ(SymmetricGame::from_epsilons(-1, 0).sign_regime(), SignRegime::NegZero);
    EXPECT_EQ(SymmetricGame::from_epsilons(1, 0).sign_regime(), SignRegime::PosZero);
}

TEST(SymmetricGame, RejectsNonFinitePayoffs) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_THROW(SymmetricGame(nan, 0, 0, 0), InvalidParameter);
    EXPECT_THROW(SymmetricGame(0, inf, 0, 0), InvalidParameter);
}

TEST(SymmetricGame, RelabelingSwapsAndNegatesEpsilons) {
    CounterRng rng(3, 0);
    for (int k = 0; k < 1000; ++k) {
        const SymmetricGame g(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        const SymmetricGame r = g.relabeled();
        EXPECT_EQ(r.eps1(), -g.eps2());
        EXPECT_EQ(r.eps2(), -g.eps1());
        EXPECT_EQ(r.relabeled(), g);
        for (Action m : {Action::Theta1, Action::Theta2}) {
            for (Action n : {Action::Theta1, Action::Theta2}) {
                EXPECT_EQ(r.payoff(other_action(m), other_action(n)), g.payoff(m, n));
            }
        }
    }
}

TEST(SymmetricGame, ShiftKeepsEpsilonsWithinTolerance) {
    CounterRng rng(5, 0);
    for (int k = 0; k < 1000; ++k) {
        const SymmetricGame g(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        const SymmetricGame s = g.shifted(rng.uniform(-10, 10));
        EXPECT_LE(std::abs(s.eps1() - g.eps1()), 1e-9);
        EXPECT_LE(std::abs(s.eps2() - g.eps2()), 1e-9);
    }
}

TEST(MixedStrategy, ValidatesProbabilities) {
    EXPECT_NO_THROW(MixedStrategy(0.25, 0.75));
    EXPECT_THROW(MixedStrategy(0.5, 0.6), InvalidParameter);
    EXPECT_THROW(MixedStrategy(-0.1, 1.1), InvalidParameter);
    EXPECT_TRUE(MixedStrategy::pure(Action::Theta2).is_pure());
    EXPECT_FALSE(MixedStrategy(0.5, 0.5).is_pure());
}

TEST(MixedStrategy, LogRatioIsSymmetricAndSaturates) {
    for (double u : {0.0, 0.3, 5.0, 40.0, 700.0}) {
        const MixedStrategy a = MixedStrategy::from_log_ratio(u);
        const MixedStrategy b = MixedStrategy::from_log_ratio(-u);
        EXPECT_EQ(a.p1(), b.p2());
        EXPECT_EQ(a.p2(), b.p1());
    }
    const MixedStrategy s = MixedStrategy::from_log_ratio(std::log(3.0));
    EXPECT_NEAR(s.p1(), 0.75, 1e-15);
    EXPECT_NEAR(s.log_ratio(), std::log(3.0), 1e-15);
    const MixedStrategy far = MixedStrategy::from_log_ratio(1e4);
    EXPECT_EQ(far.p1(), 1.0);
    EXPECT_EQ(far.p2(), 0.0);
}

TEST(ExpectedUtility, PurePairReadsEntry) {
    const SymmetricGame g(3, 1, 2, 5);
    const MixedStrategy t1 = MixedStrategy::pure(Action::Theta1);
    EXPECT_EQ(expected_utility(g, Player::One, t1, t1), 3.0);
}

TEST(ExpectedUtility, UniformProfileAveragesEntries) {
    const SymmetricGame g(3, 1, 2, 5);
    const MixedStrategy h(0.5, 0.5);
    EXPECT_DOUBLE_EQ(expected_utility(g, Player::One, h, h), 2.75);
}

TEST(ExpectedUtility, PlayerTwoIsTransposed) {
    const SymmetricGame g(3, 1, 2, 5);
    const MixedStrategy t1 = MixedStrategy::pure(Action::Theta1);
    const MixedStrategy t2 = MixedStrategy::pure(Action::Theta2);
    EXPECT_EQ(expected_utility(g, Player::Two, t1, t2), 2.0);

    CounterRng rng(9, 0);
    for (int k = 0; k < 200; ++k) {
        const MixedStrategy x = MixedStrategy::from_p1(rng.uniform01());
        const MixedStrategy y = MixedStrategy::from_p1(rng.uniform01());
        EXPECT_EQ(expected_utility(g, Player::Two, x, y), expected_utility(g, Player::One, x, y));
    }
}

TEST(DeltaFunctional, WorkedValues) {
    EXPECT_EQ(delta_functional(SymmetricGame::from_epsilons(-1, 1), MixedStrategy(0.5, 0.5)), 0.0);
    EXPECT_EQ(delta_functional(SymmetricGame::from_epsilons(2, 2), MixedStrategy(0.3, 0.7)), 2.0);
    EXPECT_NEAR(delta_functional(SymmetricGame::from_epsilons(-1, 3), MixedStrategy(0.75, 0.25)), 0.0, 1e-15);
}

TEST(DeltaFunctional, AgreesWithRatioForm) {
    CounterRng rng(11, 0);
    for (int k = 0; k < 1000; ++k) {
        const SymmetricGame g = SymmetricGame::from_epsilons(rng.uniform(-2, 2), rng.uniform(-2, 2));
        const MixedStrategy s = MixedStrategy::from_p1(rng.uniform(0.0, 0.999));
        EXPECT_NEAR(delta_functional(g, s), ratio_functional(g.eps1(), g.eps2(), s.p1() / s.p2()), 1e-12);
    }
}

}  // namespace
}  // namespace ewgame

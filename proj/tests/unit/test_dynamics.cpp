#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ewgame/dynamics.hpp"
#include "ewgame/errors.hpp"
#include "ewgame/rng.hpp"

namespace ewgame {
namespace {

TEST(EwStep, ZeroFunctionalsLeaveStateUnchanged) {
    const SymmetricGame g = SymmetricGame::from_epsilons(-1, 1);
    const DynState s{1, 0.0, 0.0};
    const DynState n = ew_step(g, s, 0.7);
    EXPECT_EQ(n.u1, 0.0);
    EXPECT_EQ(n.u2, 0.0);
    EXPECT_EQ(n.t, 2);
}

TEST(EwStep, ConstantFunctionalHandValue) {
    const SymmetricGame g = SymmetricGame::from_epsilons(2, 2);
    const DynState n = ew_step(g, DynState{1, 0.0, 0.0}, 1.0);
    EXPECT_EQ(n.u1, 2.0);
    EXPECT_NEAR(n.p1().p1(), 0.880797077977882444, 1e-15);
}

TEST(EwStep, CrossCouplesThePlayers) {
    const SymmetricGame g = SymmetricGame::from_epsilons(-1, 3);
    const DynState s{1, 0.2, -0.4};
    const auto [d1, d2] = deltas(g, s);
    const DynState n = ew_step(g, s, 0.5);
    EXPECT_EQ(n.u1, s.u1 + 0.5 * d2);
    EXPECT_EQ(n.u2, s.u2 + 0.5 * d1);
}

TEST(EwStep, RejectsBadInputs) {
    const SymmetricGame g = SymmetricGame::from_epsilons(-1, 1);
    EXPECT_THROW(ew_step(g, DynState{}, 0.0), InvalidParameter);
    EXPECT_THROW(ew_step(g, DynState{}, std::nan("")), InvalidParameter);
    EXPECT_THROW(ew_step(SymmetricGame(1, 1, 1, 1), DynState{}, 0.5), DegenerateGame);
    EXPECT_THROW(ew_step(SymmetricGame::from_epsilons(5, 5), DynState{1, 0.9e6, 0}, 1e5), NonFiniteState);
}

TEST(EwStep, StaysAtTheMixedFixedPoint) {
    const SymmetricGame g = SymmetricGame::from_epsilons(-1, 1);
    const Trajectory tr = simulate(g, DynState{}, 1.0, 500);
    EXPECT_EQ(tr.final_state.u1, 0.0);
    EXPECT_EQ(tr.final_state.u2, 0.0);
    EXPECT_EQ(tr.verdict.kind, VerdictKind::StrictMixedNE);
}

TEST(LogProbabilities, StableInBothTails) {
    EXPECT_NEAR(log_prob_theta1(0.0), std::log(0.5), 1e-15);
    EXPECT_NEAR(log_prob_theta1(-800.0), -800.0, 1e-12);
    EXPECT_NEAR(log_prob_theta2(-800.0), 0.0, 1e-300);
    EXPECT_TRUE(std::isfinite(log_prob_theta1(-1e5)));
}

TEST(DynState, RejectsPureInitialStrategies) {
    EXPECT_THROW(DynState::from_strategies(MixedStrategy::pure(Action::Theta1), MixedStrategy(0.5, 0.5)),
                 InvalidParameter);
    const DynState s = DynState::from_strategies(MixedStrategy(0.75, 0.25), MixedStrategy(0.5, 0.5));
    EXPECT_NEAR(s.u1, std::log(3.0), 1e-15);
    EXPECT_EQ(s.u2, 0.0);
}

TEST(Simulate, NegNegReachesThetaTwoPair) {
    const Trajectory tr = simulate(SymmetricGame::from_epsilons(-2, -1), DynState{1, 0.4, -0.3}, 0.5, 10'000);
    ASSERT_EQ(tr.verdict.kind, VerdictKind::PureNE);
    EXPECT_EQ(tr.verdict.pair, (ActionPair{Action::Theta2, Action::Theta2}));
}

TEST(Simulate, OppositeFunctionalsReachAsymmetricPair) {
    const SymmetricGame g = SymmetricGame::from_epsilons(-1, 3);
    // The functional vanishes at u = ln 3: above it is negative, below positive.
    const DynState init{1, 2.0, 0.5};
    const auto [d1, d2] = deltas(g, init);
    ASSERT_LT(d1, 0.0);
    ASSERT_GT(d2, 0.0);
    const Trajectory tr = simulate(g, init, 1.0, 10'000);
    ASSERT_EQ(tr.verdict.kind, VerdictKind::PureNE);
    EXPECT_EQ(tr.verdict.pair, (ActionPair{Action::Theta1, Action::Theta2}));
}

TEST(Simulate, IdenticalInitConvergesToMixedPoint) {
    const SymmetricGame g = SymmetricGame::from_epsilons(-1, 1);
    const Trajectory tr = simulate(g, DynState{1, 0.3, 0.3}, 1.0, 100'000);
    ASSERT_EQ(tr.verdict.kind, VerdictKind::StrictMixedNE);
    EXPECT_DOUBLE_EQ(tr.verdict.s1.p1(), 0.5);
    EXPECT_EQ(tr.final_state.u1, tr.final_state.u2);
}

TEST(Simulate, IdenticalTrajectoriesKeepZeroGap) {
    const SymmetricGame g = SymmetricGame::from_epsilons(-1, 2);
    SimulateOptions opts;
    opts.record_potentials = true;
    const Trajectory tr = simulate(g, DynState{1, -0.7, -0.7}, 0.5, 2000, opts);
    ASSERT_FALSE(tr.w_series.empty());
    for (double w : tr.w_series) EXPECT_EQ(w, 0.0);
    EXPECT_EQ(tr.two_flips + tr.one_flips, static_cast<std::int64_t>(tr.events.size()));
    for (const FlipEvent& e : tr.events) EXPECT_EQ(e.kind, FlipKind::TwoFlip);
}

TEST(Simulate, GapIsNondecreasingForNegPos) {
    CounterRng rng(41, 0);
    for (int k = 0; k < 50; ++k) {
        const SymmetricGame g = SymmetricGame::from_epsilons(-rng.uniform(0.1, 1), rng.uniform(0.1, 1));
        const DynState init{1, rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const Trajectory tr = simulate(g, init, rng.uniform(0.05, 2.0), 5000);
        EXPECT_TRUE(tr.w_nondecreasing);
    }
}

TEST(Simulate, HorizonAndWindowValidation) {
    const SymmetricGame g = SymmetricGame::from_epsilons(-1, 1);
    EXPECT_THROW(simulate(g, DynState{}, 0.5, 0), InvalidParameter);
    SimulateOptions opts;
    opts.tol.window = 1;
    EXPECT_THROW(simulate(g, DynState{}, 0.5, 10, opts), InvalidParameter);
}

TEST(DetectLimit, ConstantTailAtFixedPoint) {
    const SymmetricGame g = SymmetricGame::from_epsilons(-1, 1);
    const std::vector<DynState> tail(64, DynState{1, 0.0, 0.0});
    EXPECT_EQ(detect_limit(tail, g).kind, VerdictKind::StrictMixedNE);
}

TEST(DetectLimit, AlternatingTailIsPeriodTwo) {
    const SymmetricGame g = SymmetricGame::from_epsilons(-1, 1);
    std::vector<DynState> tail;
    for (int k = 0; k < 64; ++k) tail.push_back(DynState{k, k % 2 ? 1.0 : -1.0, k % 2 ? 1.0 : -1.0});
    EXPECT_EQ(detect_limit(tail, g).kind, VerdictKind::PeriodTwoOscillation);
}

TEST(DetectLimit, DivergingTailIsPure) {
    const SymmetricGame g = SymmetricGame::from_epsilons(-1, 3);
    std::vector<DynState> tail;
    for (int k = 0; k < 64; ++k) tail.push_back(DynState{k, 50.0 + k, -50.0 - k});
    const LimitVerdict v = detect_limit(tail, g);
    ASSERT_EQ(v.kind, VerdictKind::PureNE);
    EXPECT_EQ(v.pair, (ActionPair{Action::Theta1, Action::Theta2}));
}

TEST(DetectLimit, ShortTailIsUndecided) {
    const std::vector<DynState> tail(2, DynState{});
    EXPECT_EQ(detect_limit(tail, SymmetricGame::from_epsilons(-1, 1)).kind, VerdictKind::Undecided);
}

TEST(ClassifyFlip, Cases) {
    EXPECT_EQ(classify_flip(1.0, 1.0, -1.0, -1.0), FlipKind::TwoFlip);
    EXPECT_EQ(classify_flip(1.0, -1.0, -1.0, -2.0), FlipKind::OneFlip);
    EXPECT_EQ(classify_flip(1.0, 1.0, 0.0, 0.5), FlipKind::OneFlip);
    EXPECT_EQ(classify_flip(1.0, -1.0, 2.0, -2.0), FlipKind::ZeroFlip);
}

TEST(TwoFlipBound, HandValues) {
    const SymmetricGame g = SymmetricGame::from_epsilons(-1, 1);
    const TwoFlipBound b = two_flip_bound(g, 1.0, 2.0);
    EXPECT_EQ(b.beta, 1.0);
    EXPECT_NEAR(b.c, 0.393223866482963705, 1e-15);
    EXPECT_EQ(b.n_max, 0.0);
    EXPECT_THROW(two_flip_bound(SymmetricGame::from_epsilons(1, -1), 1.0, 1.0), WrongRegime);
    EXPECT_THROW(two_flip_bound(g, 1.0, 0.0), InvalidParameter);
}

TEST(ContractionMap, DerivativeAndThreshold) {
    const ContractionMap m(SymmetricGame::from_epsilons(-1, 1), 2.0);
    EXPECT_NEAR(m.derivative(0.0), 0.0, 1e-15);
    EXPECT_EQ(m(0.0), 0.0);
    EXPECT_TRUE(ContractionMap(SymmetricGame::from_epsilons(-1, 1), 7.9 / 2).is_contraction());
    EXPECT_FALSE(ContractionMap(SymmetricGame::from_epsilons(-1, 1), 8.1 / 2).is_contraction());
    EXPECT_THROW(ContractionMap(SymmetricGame::from_epsilons(-1, -1), 1.0), WrongRegime);
}

TEST(ContractionMap, LipschitzBoundDominatesNumericalSlope) {
    const ContractionMap m(SymmetricGame::from_epsilons(-1.5, 0.5), 1.2);
    const double radius = 0.5;
    const double bound = m.lipschitz_bound(radius);
    EXPECT_LT(bound, 1.0);
    for (int k = -50; k < 50; ++k) {
        const double x = radius * k / 50.0;
        const double y = radius * (k + 1) / 50.0;
        EXPECT_LE(std::abs(m(y) - m(x)), bound * (y - x) + 1e-15);
    }
}

TEST(Oscillation, ConstructedEpsilonValues) {
    EXPECT_NEAR(construct_oscillation_identical(1.0).game.eps2(), 4.32790682747730570, 1e-14);
    const std::pair<double, double> cases[] = {
        {0.25, 8.0416233283755969}, {1.0, 8.6558136549546114}, {3.0, 13.257496715790143}};
    for (auto [a, eta_gamma] : cases) {
        const OscillationSetup s = construct_oscillation_opposite(a);
        EXPECT_NEAR(s.eta * (std::abs(s.game.eps1()) + std::abs(s.game.eps2())), eta_gamma, 1e-13);
        EXPECT_GT(eta_gamma, 8.0);
    }
    EXPECT_THROW(construct_oscillation_identical(0.0), InvalidParameter);
}

TEST(Oscillation, BothModesArePeriodTwo) {
    for (double a : {0.25, 1.0, 3.0}) {
        for (const OscillationSetup& s : {construct_oscillation_identical(a), construct_oscillation_opposite(a)}) {
            DynState cur = s.init;
            for (int k = 0; k < 1000; ++k) cur = ew_step(s.game, cur, s.eta);
            const DynState next = ew_step(s.game, ew_step(s.game, cur, s.eta), s.eta);
            EXPECT_LT(std::abs(next.u1 - cur.u1), 1e-9);
            EXPECT_LT(std::abs(next.u2 - cur.u2), 1e-9);
            EXPECT_GT(std::abs(ew_step(s.game, cur, s.eta).u1 - cur.u1), 0.1);
        }
    }
}

TEST(MixedLimit, RatioBoundHandValue) {
    EXPECT_NEAR(mixed_limit_ratio_bound(1.0, 1.0, 1.0, std::exp(1.0)), 4.24066664280065268, 1e-13);
    EXPECT_THROW(mixed_limit_ratio_bound(1.0, 1.0, 2.0, 1.0), InvalidParameter);
    EXPECT_THROW(mixed_limit_ratio_bound(-1.0, 1.0, 1.0, 2.0), WrongRegime);
}

TEST(MixedLimit, OpponentRatioStaysBounded) {
    const SymmetricGame g = SymmetricGame::from_epsilons(0, 0.5);
    const double a_cap = 2.0, r_j = 0.3;
    const DynState init = construct_mixed_limit_example(r_j, a_cap, g, 1.0);
    DynState cur = init;
    for (int k = 0; k < 20000; ++k) {
        cur = ew_step(g, cur, 1.0);
        ASSERT_LE(std::exp(cur.u2), a_cap);
    }
    EXPECT_GT(cur.u1, init.u1);
}

}  // namespace
}  // namespace ewgame

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <set>
#include <sstream>

#include "ewgame/errors.hpp"
#include "ewgame/harness.hpp"
#include "ewgame/json_io.hpp"
#include "ewgame/rng.hpp"

namespace ewgame {
namespace {

TEST(CounterRng, SameSeedSameSequence) {
    CounterRng a(7, 3), b(7, 3), c(7, 4);
    bool differs = false;
    for (int k = 0; k < 1000; ++k) {
        const std::uint64_t x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        differs = differs || x != c.next_u64();
    }
    EXPECT_TRUE(differs);
}

TEST(CounterRng, UniformStaysInRange) {
    CounterRng r(1, 0);
    for (int k = 0; k < 10000; ++k) {
        const double u = r.uniform01();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        EXPECT_LT(r.below(7), 7u);
    }
}

TEST(RandomGame, SeededSequenceIsReproducible) {
    CounterRng a(7, 0), b(7, 0);
    for (int k = 0; k < 100; ++k) EXPECT_EQ(random_game(a, -1, 1), random_game(b, -1, 1));
}

TEST(RandomGame, NeverDegenerate) {
    CounterRng r(8, 0);
    for (int k = 0; k < 10000; ++k) EXPECT_FALSE(random_game(r, -1, 1).is_degenerate());
    EXPECT_THROW(random_game(r, 1, -1), InvalidParameter);
}

TEST(RandomGame, RegimeDrawsLandInRegime) {
    CounterRng r(9, 0);
    for (SignRegime regime : {SignRegime::NegNeg, SignRegime::PosPos, SignRegime::NegPos, SignRegime::PosNeg,
                              SignRegime::ZeroNeg, SignRegime::ZeroPos, SignRegime::NegZero, SignRegime::PosZero}) {
        for (int k = 0; k < 200; ++k) EXPECT_EQ(random_game_in_regime(r, regime, -1, 1).sign_regime(), regime);
    }
}

TEST(RandomInit, PatternsHaveRequestedFunctionalSigns) {
    CounterRng r(10, 0);
    for (int k = 0; k < 500; ++k) {
        const SymmetricGame g = random_game_in_regime(r, SignRegime::NegPos, -1, 1);
        const auto [o1, o2] = deltas(g, random_init_with_pattern(r, g, DeltaPattern::Opposite));
        EXPECT_LT(o1 * o2, 0.0);
        const auto [s1, s2] = deltas(g, random_init_with_pattern(r, g, DeltaPattern::Same));
        EXPECT_GT(s1 * s2, 0.0);
        const DynState id = random_init_with_pattern(r, g, DeltaPattern::Identical);
        EXPECT_EQ(id.u1, id.u2);
    }
}

TEST(VerifyRun, AgreesOnMatchedSignGame) {
    const RunRecord rec = verify_run(SymmetricGame::from_epsilons(-2, -1), DynState{1, 0.3, -0.2}, 0.5, 100'000);
    EXPECT_EQ(rec.prediction.row, Row::R1);
    EXPECT_EQ(rec.agreement, Agreement::Match);
    EXPECT_TRUE(rec.envelopes_hold);
}

TEST(VerifyRun, MinStepsDelaysTheVerdict) {
    const RunRecord rec =
        verify_run(SymmetricGame::from_epsilons(-2, -1), DynState{1, 0.3, -0.2}, 0.5, 100'000, {}, false, 5000);
    EXPECT_GE(rec.steps, 5000);
    EXPECT_EQ(rec.agreement, Agreement::Match);
}

TEST(Sweep, ConfigValidation) {
    SweepConfig cfg;
    cfg.etas = {};
    EXPECT_THROW(cfg.validate(), InvalidParameter);
    cfg.etas = {-1.0};
    EXPECT_THROW(cfg.validate(), InvalidParameter);
    cfg.etas = {0.5};
    cfg.count = 3;
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_EQ(cfg.run_count(), 3u);
}

TEST(Sweep, ParallelEqualsSerial) {
    SweepConfig cfg;
    cfg.seed = 7;
    cfg.count = 60;
    cfg.etas = {0.1, 1.0};
    cfg.horizon = 20'000;
    cfg.threads = 1;
    const VerificationReport serial = run_sweep(cfg);
    cfg.threads = 4;
    const VerificationReport parallel = run_sweep(cfg);
    ASSERT_EQ(serial.runs.size(), 120u);
    ASSERT_EQ(serial.runs.size(), parallel.runs.size());
    for (std::size_t k = 0; k < serial.runs.size(); ++k) {
        EXPECT_EQ(serial.runs[k].game, parallel.runs[k].game);
        EXPECT_EQ(serial.runs[k].init, parallel.runs[k].init);
        EXPECT_EQ(serial.runs[k].steps, parallel.runs[k].steps);
        EXPECT_EQ(serial.runs[k].verdict.to_string(), parallel.runs[k].verdict.to_string());
    }
    EXPECT_EQ(io::report_to_json(serial).dump(), io::report_to_json(parallel).dump());
}

TEST(Sweep, RandomCampaignHasNoMismatch) {
    SweepConfig cfg;
    cfg.seed = 7;
    cfg.count = 100;
    const VerificationReport r = run_sweep(cfg);
    EXPECT_EQ(r.mismatches(), 0u);
    std::size_t total = 0;
    for (const auto& [row, counts] : r.per_row) total += counts.runs;
    EXPECT_EQ(total, 100u);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), 4, [&](std::size_t k) { hits[k]++; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(JsonIo, GameRoundTripAndRejection) {
    const SymmetricGame g(0.1, -0.25, 3.5, 1e-17);
    EXPECT_EQ(io::game_from_json(io::game_to_json(g)), g);
    EXPECT_THROW(io::game_from_json(io::parse_json(R"({"a":1,"b":2,"c":3})")), ParseError);
    EXPECT_THROW(io::parse_json("{not json"), ParseError);
    EXPECT_THROW(io::game_from_json(io::parse_json(R"({"a":"x","b":2,"c":3,"d":4})")), ParseError);
}

TEST(JsonIo, InitAcceptsBothForms) {
    const DynState a = io::init_from_json(io::parse_json(R"({"u1":0.5,"u2":-1})"));
    EXPECT_EQ(a.u1, 0.5);
    EXPECT_EQ(a.u2, -1.0);
    const DynState b = io::init_from_json(io::parse_json(R"({"p1":[0.75,0.25],"p2":[0.5,0.5]})"));
    EXPECT_NEAR(b.u1, std::log(3.0), 1e-15);
    EXPECT_EQ(b.u2, 0.0);
    EXPECT_THROW(io::init_from_json(io::parse_json(R"({"p1":[1,0],"p2":[0.5,0.5]})")), ParseError);
}

TEST(JsonIo, TrajectoryCsvRoundTrip) {
    const Trajectory tr = simulate(SymmetricGame::from_epsilons(-1, 3), DynState{1, 0.4, 0.2}, 0.5, 3000);
    std::stringstream ss;
    io::write_trajectory_csv(ss, tr);
    const io::CsvTable table = io::read_csv(ss);
    ASSERT_EQ(table.header.size(), 12u);
    EXPECT_EQ(table.header[0], "t");
    EXPECT_EQ(table.header[5], "u1");
    ASSERT_EQ(table.rows.size(), tr.states.size());
    for (std::size_t k = 0; k < tr.states.size(); ++k) {
        EXPECT_EQ(std::stoll(table.rows[k][0]), tr.states[k].state.t);
        EXPECT_EQ(std::stod(table.rows[k][5]), tr.states[k].state.u1);
        EXPECT_EQ(std::stod(table.rows[k][6]), tr.states[k].state.u2);
    }
}

TEST(JsonIo, RaggedCsvIsRejected) {
    std::stringstream ss("a,b\n1,2\n3\n");
    EXPECT_THROW(io::read_csv(ss), ParseError);
}

}  // namespace
}  // namespace ewgame

#include "ewgame/acceptance.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <mutex>

#include "ewgame/bank.hpp"
#include "ewgame/classifier.hpp"
#include "ewgame/dynamics.hpp"
#include "ewgame/equilibria.hpp"
#include "ewgame/harness.hpp"
#include "ewgame/oracles.hpp"

namespace ewgame::verify {

namespace {

constexpr std::int64_t kHorizon = 1'000'000;
/// Stepwise envelope checks keep running this long even after a verdict.
constexpr std::int64_t kEnvelopeSteps = 10'000;

using Clock = std::chrono::steady_clock;

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

/// Every criterion draws from its own block of streams so adding runs to one
/// criterion never perturbs another.
CounterRng stream_rng(const AcceptanceOptions& opts, int criterion, std::uint64_t index) {
    return CounterRng(opts.seed, (static_cast<std::uint64_t>(criterion) << 32) + index);
}

double elapsed(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::vector<RunRecord> run_batch(std::size_t n, unsigned threads, const std::function<RunRecord(std::size_t)>& fn) {
    std::vector<RunRecord> out(n);
    parallel_for(n, threads, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

std::size_t count_if_runs(const std::vector<RunRecord>& runs, const std::function<bool(const RunRecord&)>& pred) {
    return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), pred));
}

bool decided(const RunRecord& r) { return r.verdict.kind != VerdictKind::Undecided; }

/// Rounds onto the grid k / 2^20 so sums and differences of payoffs are exact.
double dyadic(double x) { return std::round(x * 1048576.0) / 1048576.0; }

}  // namespace

CriterionResult check_same_sign_exponential(const AcceptanceOptions& opts) {
    const auto start = Clock::now();
    const double etas[] = {0.1, 1.0, 5.0};
    constexpr std::size_t kGames = 200;
    auto runs = run_batch(kGames * 3, opts.threads, [&](std::size_t i) {
        const std::size_t g = i / 3;
        CounterRng rng = stream_rng(opts, 1, g);
        const SignRegime regime = g % 2 == 0 ? SignRegime::NegNeg : SignRegime::PosPos;
        const SymmetricGame game = random_game_in_regime(rng, regime, -1.0, 1.0);
        const DynState init = random_init(rng);
        return verify_run(game, init, etas[i % 3], kHorizon, {}, false, kEnvelopeSteps);
    });
    const auto violations = count_if_runs(runs, [](const RunRecord& r) { return !r.envelopes_hold; });
    const auto matches = count_if_runs(runs, [](const RunRecord& r) { return r.agreement == Agreement::Match; });
    const double secs = elapsed(start);
    CriterionResult res;
    res.id = 1;
    res.title = "same-sign games: exponential envelopes and pure symmetric limit";
    res.seconds = secs;
    res.pass = violations == 0 && matches == runs.size() && secs < 30.0;
    res.detail = fmt("%zu runs, %zu envelope violations, %zu/%zu predicted PureNE, runtime %.2f s (limit 30 s)",
                     runs.size(), violations, matches, runs.size(), secs);
    return res;
}

CriterionResult check_opposite_delta_asymmetric(const AcceptanceOptions& opts) {
    const auto start = Clock::now();
    const double etas[] = {0.5, 5.0};
    constexpr std::size_t kGames = 200;
    auto runs = run_batch(kGames * 2, opts.threads, [&](std::size_t i) {
        CounterRng rng = stream_rng(opts, 2, i / 2);
        const SymmetricGame game = random_game_in_regime(rng, SignRegime::NegPos, -1.0, 1.0);
        const DynState init = random_init_with_pattern(rng, game, DeltaPattern::Opposite);
        return verify_run(game, init, etas[i % 2], kHorizon, {}, false, kEnvelopeSteps);
    });
    const auto rows = count_if_runs(runs, [](const RunRecord& r) { return r.prediction.row == Row::R3; });
    const auto violations = count_if_runs(runs, [](const RunRecord& r) { return !r.envelopes_hold; });
    const auto matches = count_if_runs(runs, [](const RunRecord& r) {
        return r.verdict.kind == VerdictKind::PureNE && r.prediction.expected_pair &&
               r.verdict.pair == *r.prediction.expected_pair;
    });
    CriterionResult res;
    res.id = 2;
    res.title = "eps1<0<eps2, opposite-sign Delta: predicted asymmetric pure NE";
    res.seconds = elapsed(start);
    res.pass = rows == runs.size() && violations == 0 && matches == runs.size();
    res.detail = fmt("%zu runs (%zu classified r3), %zu/%zu reached the predicted pair, %zu decay-bound violations",
                     runs.size(), rows, matches, runs.size(), violations);
    return res;
}

CriterionResult check_same_delta_two_flips(const AcceptanceOptions& opts) {
    const auto start = Clock::now();
    constexpr std::size_t kRuns = 200;
    auto runs = run_batch(kRuns, opts.threads, [&](std::size_t i) {
        CounterRng rng = stream_rng(opts, 3, i);
        const SymmetricGame game = random_game_in_regime(rng, SignRegime::NegPos, -1.0, 1.0);
        const DynState init = random_init_with_pattern(rng, game, DeltaPattern::Same);
        const double eta = i % 2 == 0 ? 0.5 : 2.0;
        return verify_run(game, init, eta, kHorizon);
    });
    const auto rows = count_if_runs(runs, [](const RunRecord& r) { return r.prediction.row == Row::R4; });
    const auto within = count_if_runs(runs, [](const RunRecord& r) {
        return r.bound_n_max && static_cast<double>(r.two_flips) <= *r.bound_n_max;
    });
    const auto n_decided = count_if_runs(runs, decided);
    const auto good = count_if_runs(runs, [](const RunRecord& r) {
        if (!decided(r)) return true;
        return r.verdict.kind == VerdictKind::PureNE && r.verdict.pair.first != r.verdict.pair.second;
    });
    std::int64_t max_flips = 0;
    double max_bound = 0.0;
    for (const RunRecord& r : runs) {
        max_flips = std::max(max_flips, r.two_flips);
        if (r.bound_n_max) max_bound = std::max(max_bound, *r.bound_n_max);
    }
    CriterionResult res;
    res.id = 3;
    res.title = "eps1<0<eps2, same-sign Delta: TwoFlip bound and asymmetric pure limit";
    res.seconds = elapsed(start);
    res.pass = rows == runs.size() && within == runs.size() && good == runs.size();
    res.detail = fmt("%zu runs (%zu classified r4), TwoFlip count within bound in %zu/%zu (max count %lld, max "
                     "bound %.3g), %zu/%zu runs decided-and-asymmetric or undecided, Undecided rate %.4f",
                     runs.size(), rows, within, runs.size(), static_cast<long long>(max_flips), max_bound, good,
                     runs.size(), 1.0 - static_cast<double>(n_decided) / static_cast<double>(runs.size()));
    return res;
}

CriterionResult check_identical_init_contraction(const AcceptanceOptions& opts) {
    const auto start = Clock::now();
    constexpr std::size_t kGames = 100;
    struct Outcome {
        bool mixed_limit = false;
        bool at_profile = false;
        double factor = 1.0;
        std::int64_t steps = 0;
    };
    std::vector<Outcome> outcomes(kGames);
    parallel_for(kGames, opts.threads, [&](std::size_t i) {
        CounterRng rng = stream_rng(opts, 4, i);
        const SymmetricGame game = random_game_in_regime(rng, SignRegime::NegPos, -1.0, 1.0);
        const double gamma = std::abs(game.eps1()) + std::abs(game.eps2());
        const double eta = 0.9 * 8.0 / gamma;
        const DynState init = random_init_with_pattern(rng, game, DeltaPattern::Identical);
        const double shift = log_root_ratio(game);

        std::vector<double> uhat{init.u1 - shift};
        SimulateOptions so;
        so.record_states = false;
        so.on_step = [&](const DynState&, const DynState& next) { uhat.push_back(next.u1 - shift); };
        const Trajectory tr = simulate(game, init, eta, kHorizon, so);

        Outcome& o = outcomes[i];
        o.steps = tr.steps;
        o.mixed_limit = tr.verdict.kind == VerdictKind::StrictMixedNE;
        if (o.mixed_limit) {
            const MixedStrategy p = symmetric_mixed_equilibrium(game);
            o.at_profile = std::abs(tr.verdict.s1.p1() - p.p1()) < 1e-7 && std::abs(tr.verdict.s2.p1() - p.p1()) < 1e-7;
        }
        // Tail contraction factor: largest one-step ratio |u_hat(t+1)| / |u_hat(t)|
        // over the final approach, restricted to magnitudes well above rounding.
        double factor = 0.0;
        bool any = false;
        for (std::size_t k = 0; k + 1 < uhat.size(); ++k) {
            const double a = std::abs(uhat[k]);
            if (a < 1e-12 || a > 1e-3) continue;
            factor = std::max(factor, std::abs(uhat[k + 1]) / a);
            any = true;
        }
        if (!any) {
            // The approach jumped across the band; use the last step above rounding.
            for (std::size_t k = uhat.size(); k-- > 1;) {
                if (std::abs(uhat[k - 1]) >= 1e-12) {
                    factor = std::abs(uhat[k]) / std::abs(uhat[k - 1]);
                    break;
                }
            }
        }
        o.factor = factor;
    });
    std::size_t mixed = 0, at_profile = 0, contracting = 0;
    double worst = 0.0;
    std::int64_t max_steps = 0;
    for (const Outcome& o : outcomes) {
        mixed += o.mixed_limit;
        at_profile += o.at_profile;
        contracting += o.factor < 1.0;
        worst = std::max(worst, o.factor);
        max_steps = std::max(max_steps, o.steps);
    }
    CriterionResult res;
    res.id = 4;
    res.title = "eps1<0<eps2, identical init, eta = 0.9*8/Gamma: strictly mixed limit";
    res.seconds = elapsed(start);
    res.pass = mixed == kGames && at_profile == kGames && contracting == kGames;
    res.detail = fmt("%zu/%zu StrictMixedNE (%zu at p_SE), max steps %lld, tail contraction factor < 1 in %zu/%zu "
                     "(worst %.4f)",
                     mixed, kGames, at_profile, static_cast<long long>(max_steps), contracting, kGames, worst);
    return res;
}

CriterionResult check_oscillation_constructions(const AcceptanceOptions&) {
    const auto start = Clock::now();
    int ok = 0, total = 0;
    double worst_residual = 0.0, min_movement = INFINITY, min_product = INFINITY;
    for (double a : {0.25, 1.0, 3.0}) {
        for (bool identical : {true, false}) {
            const OscillationSetup s = identical ? construct_oscillation_identical(a) : construct_oscillation_opposite(a);
            std::vector<DynState> states{s.init};
            SimulateOptions so;
            so.stop_on_verdict = false;
            so.record_states = false;
            so.on_step = [&](const DynState&, const DynState& next) { states.push_back(next); };
            simulate(s.game, s.init, s.eta, 1000, so);
            double residual = 0.0, movement = INFINITY;
            for (std::size_t t = 0; t + 2 < states.size(); ++t) {
                residual = std::max({residual, std::abs(states[t + 2].u1 - states[t].u1),
                                     std::abs(states[t + 2].u2 - states[t].u2)});
            }
            for (std::size_t t = 0; t + 1 < states.size(); ++t) {
                movement = std::min(movement, std::max(std::abs(states[t + 1].u1 - states[t].u1),
                                                       std::abs(states[t + 1].u2 - states[t].u2)));
            }
            const double product = s.eta * (std::abs(s.game.eps1()) + std::abs(s.game.eps2()));
            ++total;
            if (states.size() == 1001 && residual < 1e-9 && movement > 0.1 && product > 8.0) ++ok;
            worst_residual = std::max(worst_residual, residual);
            min_movement = std::min(min_movement, movement);
            min_product = std::min(min_product, product);
        }
    }
    CriterionResult res;
    res.id = 5;
    res.title = "period-2 oscillation constructions, a in {0.25, 1, 3}";
    res.seconds = elapsed(start);
    res.pass = ok == total;
    res.detail = fmt("%d/%d constructions oscillate over 1000 steps: max period-2 residual %.3g, min step movement "
                     "%.4f, min eta*Gamma %.4f (> 8 required)",
                     ok, total, worst_residual, min_movement, min_product);
    return res;
}

CriterionResult check_positive_negative_regime(const AcceptanceOptions& opts) {
    const auto start = Clock::now();
    constexpr std::size_t kRuns = 200;
    auto same = run_batch(kRuns, opts.threads, [&](std::size_t i) {
        CounterRng rng = stream_rng(opts, 6, i);
        const SymmetricGame game = random_game_in_regime(rng, SignRegime::PosNeg, -1.0, 1.0);
        const DynState init = random_init_with_pattern(rng, game, DeltaPattern::Same);
        return verify_run(game, init, i % 2 == 0 ? 0.5 : 5.0, kHorizon, {}, false, kEnvelopeSteps);
    });
    auto opposite = run_batch(kRuns, opts.threads, [&](std::size_t i) {
        CounterRng rng = stream_rng(opts, 6, kRuns + i);
        const SymmetricGame game = random_game_in_regime(rng, SignRegime::PosNeg, -1.0, 1.0);
        const DynState init = random_init_with_pattern(rng, game, DeltaPattern::Opposite);
        const double gamma = std::abs(game.eps1()) + std::abs(game.eps2());
        const double eta = rng.uniform(0.05, 0.99) * 4.0 / gamma;
        return verify_run(game, init, eta, kHorizon);
    });
    const auto same_rows = count_if_runs(same, [](const RunRecord& r) { return r.prediction.row == Row::R6; });
    const auto same_match = count_if_runs(same, [](const RunRecord& r) {
        return r.agreement == Agreement::Match && r.verdict.kind == VerdictKind::PureNE &&
               r.verdict.pair.first == r.verdict.pair.second;
    });
    const auto same_env = count_if_runs(same, [](const RunRecord& r) { return !r.envelopes_hold; });
    const auto opp_rows = count_if_runs(opposite, [](const RunRecord& r) { return r.prediction.row == Row::R7; });
    const auto opp_flips = count_if_runs(opposite, [](const RunRecord& r) { return r.two_flips > 0; });
    const auto opp_decided = count_if_runs(opposite, decided);
    const auto opp_in_set = count_if_runs(opposite, [](const RunRecord& r) {
        return r.agreement == Agreement::Match || r.agreement == Agreement::SetMatch;
    });
    const auto opp_mixed =
        count_if_runs(opposite, [](const RunRecord& r) { return r.verdict.kind == VerdictKind::StrictMixedNE; });
    CriterionResult res;
    res.id = 6;
    res.title = "eps1>0>eps2: same-sign Delta pure symmetric limits, opposite-sign Delta without TwoFlips";
    res.seconds = elapsed(start);
    res.pass = same_rows == kRuns && same_match == kRuns && same_env == 0 && opp_rows == kRuns && opp_flips == 0 &&
               opp_in_set == opp_decided;
    res.detail = fmt("same-sign: %zu/%zu predicted pure symmetric NE, %zu envelope violations; opposite-sign "
                     "(eta*Gamma<4): %zu runs with TwoFlips, %zu/%zu decided verdicts in the predicted set (%zu at "
                     "p_SE), %zu undecided",
                     same_match, kRuns, same_env, opp_flips, opp_in_set, opp_decided, opp_mixed,
                     kRuns - opp_decided);
    return res;
}

CriterionResult check_zero_epsilon_regimes(const AcceptanceOptions& opts) {
    const auto start = Clock::now();
    constexpr std::size_t kRuns = 100;
    const double etas[] = {0.1, 1.0, 5.0};
    auto neg = run_batch(kRuns, opts.threads, [&](std::size_t i) {
        CounterRng rng = stream_rng(opts, 7, i);
        const SymmetricGame game = random_game_in_regime(rng, SignRegime::ZeroNeg, -1.0, 1.0);
        return verify_run(game, random_init(rng), etas[i % 3], kHorizon, {}, false, kEnvelopeSteps);
    });
    const auto neg_ok = count_if_runs(neg, [](const RunRecord& r) {
        return r.agreement == Agreement::Match && r.verdict.pair == ActionPair{Action::Theta2, Action::Theta2} &&
               r.envelopes_hold;
    });

    // Identical inits keep u1 == u2 and Delta = p_2 eps2 > 0, so u increases
    // without a finite fixed point; for small eta * eps2 the approach to the
    // vertex is logarithmic and may not reach the detection band within the
    // horizon. Such runs count only if they show that invariant at every step.
    struct Outcome {
        Agreement agreement = Agreement::Mismatch;
        bool pure_theta1 = false;
        bool invariant = true;
    };
    std::vector<Outcome> pos(kRuns);
    parallel_for(kRuns, opts.threads, [&](std::size_t i) {
        CounterRng rng = stream_rng(opts, 7, kRuns + i);
        const SymmetricGame game = random_game_in_regime(rng, SignRegime::ZeroPos, -1.0, 1.0);
        const DynState init = random_init_with_pattern(rng, game, DeltaPattern::Identical);
        const double eta = etas[i % 3];
        Outcome& o = pos[i];
        SimulateOptions so;
        so.record_states = false;
        so.on_step = [&](const DynState& prev, const DynState& next) {
            if (next.u1 != next.u2 || !(next.u1 > prev.u1)) o.invariant = false;
        };
        const Trajectory tr = simulate(game, init, eta, kHorizon, so);
        o.agreement = check_prediction(classify(game, init, eta), tr.verdict);
        o.pure_theta1 = tr.verdict.kind == VerdictKind::PureNE &&
                        tr.verdict.pair == ActionPair{Action::Theta1, Action::Theta1};
    });
    std::size_t pos_pure = 0, pos_pending = 0;
    for (const Outcome& o : pos) {
        if (!o.invariant) continue;
        if (o.agreement == Agreement::Match && o.pure_theta1) ++pos_pure;
        if (o.agreement == Agreement::Pending) ++pos_pending;
    }
    const std::size_t pos_ok = pos_pure + pos_pending;

    // Mixed-limit construction: the bounded player's ratio never exceeds A and
    // the diverging player's log-ratio stays above its linear lower envelope.
    struct Case {
        double eps2, eta, r_j, cap;
    };
    const Case cases[] = {{1.0, 1.0, 1.0, std::exp(1.0)}, {0.5, 0.3, 0.5, 2.0}, {2.0, 1.5, 2.0, 10.0},
                          {1.0, 0.05, 0.2, 0.4}};
    int constructions_ok = 0;
    double worst_rj = 0.0;
    for (const Case& c : cases) {
        const SymmetricGame game = SymmetricGame::from_epsilons(0.0, c.eps2);
        const DynState init = construct_mixed_limit_example(c.r_j, c.cap, game, c.eta);
        const double log_cap = std::log(c.cap);
        const double slope = c.eta * c.eps2 / (1.0 + c.cap);
        bool ok = true;
        double max_uj = init.u2;
        SimulateOptions so;
        so.stop_on_verdict = false;
        so.record_states = false;
        so.on_step = [&](const DynState&, const DynState& next) {
            max_uj = std::max(max_uj, next.u2);
            const double lower = init.u1 + slope * static_cast<double>(next.t - init.t);
            if (next.u2 > log_cap || next.u1 < lower - 1e-9 * std::max(1.0, std::abs(lower))) ok = false;
        };
        const Trajectory tr = simulate(game, init, c.eta, 100'000, so);
        ok = ok && tr.steps == 100'000;
        constructions_ok += ok;
        worst_rj = std::max(worst_rj, std::exp(max_uj) / c.cap);
    }
    constexpr int kCases = static_cast<int>(std::size(cases));

    CriterionResult res;
    res.id = 7;
    res.title = "eps1 = 0: pure limits and the mixed-limit construction";
    res.seconds = elapsed(start);
    res.pass = neg_ok == kRuns && pos_ok == kRuns && constructions_ok == kCases;
    res.detail = fmt("eps2<0: %zu/%zu PureNE(theta2,theta2) within envelopes; eps2>0 identical init: %zu/%zu "
                     "consistent (%zu PureNE(theta1,theta1), %zu still rising monotonically toward theta1 at the "
                     "horizon); construction: %d/%d cases keep r_j <= A (max r_j/A %.4f) above the "
                     "lower envelope for 1e5 steps",
                     neg_ok, kRuns, pos_ok, kRuns, pos_pure, pos_pending, constructions_ok, kCases, worst_rj);
    return res;
}

CriterionResult check_ce_closed_form(const AcceptanceOptions& opts) {
    const auto start = Clock::now();
    constexpr double kBand = 2e-9;
    constexpr std::size_t kSamples = 10'000;
    const SignRegime regimes[] = {SignRegime::NegNeg, SignRegime::PosPos,  SignRegime::NegPos,
                                  SignRegime::PosNeg, SignRegime::ZeroNeg, SignRegime::ZeroPos,
                                  SignRegime::NegZero, SignRegime::PosZero};
    constexpr std::size_t kRegimes = std::size(regimes);
    struct Tally {
        std::size_t disagree = 0, borderline = 0, members = 0;
    };
    std::vector<Tally> tallies(kRegimes);
    parallel_for(kRegimes, opts.threads, [&](std::size_t k) {
        Tally& tally = tallies[k];
        for (std::size_t s = 0; s < kSamples; ++s) {
            CounterRng rng = stream_rng(opts, 8, k * kSamples + s);
            const SymmetricGame game = random_game_in_regime(rng, regimes[k], -1.0, 1.0);
            // Uniform on the simplex, plus two structured families: product
            // distributions (the CE region near the mixed equilibria) and sparse
            // supports (the faces that carry every CE of the eps == 0 regimes).
            std::array<double, 4> w{};
            if (s % 4 == 2) {
                double total = 0.0;
                while (total == 0.0) {
                    for (double& v : w) {
                        v = rng.uniform01() < 0.5 ? 0.0 : -std::log1p(-rng.uniform01());
                        total += v;
                    }
                }
                for (double& v : w) v /= total;
                if (w[3] != 0.0) w[3] = std::max(0.0, 1.0 - w[0] - w[1] - w[2]);
            } else if (s % 4 == 3) {
                const double x = rng.uniform01(), y = rng.uniform01();
                w = {x * y, x * (1.0 - y), (1.0 - x) * y, (1.0 - x) * (1.0 - y)};
            } else {
                double total = 0.0;
                for (double& v : w) {
                    v = -std::log1p(-rng.uniform01());
                    total += v;
                }
                for (double& v : w) v /= total;
                w[3] = std::max(0.0, 1.0 - w[0] - w[1] - w[2]);
            }
            const JointDistribution nu(w[0], w[1], w[2], w[3]);
            const bool brute = ce_membership_bruteforce(game, nu);
            const bool closed = ce_membership_closed_form(game, nu);
            // Exact zeros (from zero weights) are unambiguous; only nonzero margins
            // inside the band are at the mercy of rounding.
            const auto in_band = [&](double m) { return m != 0.0 && std::abs(m) < kBand; };
            bool near = false;
            for (double m : ce_obedience_margins(game, nu)) near = near || in_band(m);
            for (double m : ce_closed_form_margins(game, nu)) near = near || in_band(m);
            if (near) {
                ++tally.borderline;
                continue;
            }
            tally.members += brute;
            tally.disagree += brute != closed;
        }
    });
    std::size_t disagree = 0, borderline = 0, members = 0;
    for (const Tally& t : tallies) {
        disagree += t.disagree;
        borderline += t.borderline;
        members += t.members;
    }
    const std::size_t total = kSamples * kRegimes;
    CriterionResult res;
    res.id = 8;
    res.title = "correlated equilibria: closed form vs obedience inequalities";
    res.seconds = elapsed(start);
    res.pass = disagree == 0;
    res.detail = fmt("%zu samples over %zu sign regimes: %zu disagreements outside the 2e-9 band, borderline "
                     "fraction %.4f, CE fraction %.4f",
                     total, kRegimes, disagree, static_cast<double>(borderline) / static_cast<double>(total),
                     static_cast<double>(members) / static_cast<double>(total - borderline));
    return res;
}

CriterionResult check_bank_configurations(const AcceptanceOptions& opts) {
    using namespace bank;
    const auto start = Clock::now();
    struct Config {
        const char* label;
        CreditDistribution dist;
        BankParams params;
        int sign1, sign2;
        BankAction limit1, limit2;
    };
    const BankParams rates48 = BankParams::from_rates(0.4, 0.8);
    const BankParams rates67 = BankParams::from_rates(0.6, 0.7);
    const std::vector<Config> configs = {
        {"(+,+)", CreditDistribution::truncated_gaussian(0.3, 0.1), rates48, 1, 1, BankAction::LowTauHighRate,
         BankAction::LowTauHighRate},
        {"(-,-)", CreditDistribution::truncated_gaussian(0.1, 0.3), rates48, -1, -1, BankAction::HighTauLowRate,
         BankAction::HighTauLowRate},
        {"(+,-)", CreditDistribution::truncated_gaussian(0.1, 0.2), rates48, 1, -1, BankAction::HighTauLowRate,
         BankAction::HighTauLowRate},
        {"(-,+)", CreditDistribution::piecewise_uniform(0.01, 0.95, rates67.tau_l, rates67.tau_h), rates67, -1, 1,
         BankAction::LowTauHighRate, BankAction::HighTauLowRate},
    };
    const Weights init1{0.1, 0.5, 0.3, 0.1};
    const Weights init2{0.1, 0.3, 0.5, 0.1};
    constexpr std::int64_t kBankHorizon = 300'000;
    constexpr std::uint64_t kSamples = 10'000'000;

    struct Outcome {
        bool signs = false, limits = false, dominated = false, oracle = false;
        double max_z = 0.0;
        double dom_weight = 0.0;
        std::string eps;
    };
    std::vector<Outcome> outcomes(configs.size());
    parallel_for(configs.size(), opts.threads, [&](std::size_t k) {
        const Config& c = configs[k];
        Outcome& o = outcomes[k];
        const SymmetricGame g = reduce_to_2x2(c.dist, c.params);
        const auto sign = [](double x) { return x > 0.0 ? 1 : x < 0.0 ? -1 : 0; };
        o.signs = sign(g.eps1()) == c.sign1 && sign(g.eps2()) == c.sign2;
        o.eps = fmt("%s eps=(%.4g,%.4g)", c.label, g.eps1(), g.eps2());

        const BankExperiment ex = run_bank_experiment(c.dist, c.params, init1, init2, 0.1, kBankHorizon, false);
        o.limits = ex.limit1 == c.limit1 && ex.limit2 == c.limit2;
        o.dom_weight = ex.dominated_weight;
        o.dominated = ex.dominated_weight < 1e-10;

        const UtilityMatrix exact = utility_matrix_4x4(c.dist, c.params);
        const MonteCarloTable mc = monte_carlo_utility_table(c.dist, c.params, kSamples, opts.seed + 1000 + k);
        bool ok = true;
        for (int i = 0; i < kBankActions; ++i) {
            for (int j = 0; j < kBankActions; ++j) {
                const double diff = std::abs(mc.mean[i][j] - exact[i][j]);
                const double se = mc.std_error[i][j];
                if (se > 0.0) {
                    o.max_z = std::max(o.max_z, diff / se);
                    ok = ok && diff <= 3.0 * se;
                } else {
                    ok = ok && diff <= 1e-12;
                }
            }
        }
        o.oracle = ok;
    });
    const double secs = elapsed(start);
    bool pass = secs < 120.0;
    std::string detail;
    for (const Outcome& o : outcomes) {
        pass = pass && o.signs && o.limits && o.dominated && o.oracle;
        detail += fmt("%s signs %s, limits %s, dominated weight %.2g, MC max |z| %.2f; ", o.eps.c_str(),
                      o.signs ? "ok" : "WRONG", o.limits ? "ok" : "WRONG", o.dom_weight, o.max_z);
    }
    detail += fmt("runtime %.2f s (limit 120 s)", secs);
    CriterionResult res;
    res.id = 9;
    res.title = "bank game: sign regimes, 4-action limits, Monte Carlo table oracle";
    res.seconds = secs;
    res.pass = pass;
    res.detail = detail;
    return res;
}

CriterionResult check_epsilon_sufficiency(const AcceptanceOptions& opts) {
    const auto start = Clock::now();
    constexpr std::size_t kPairs = 50;
    constexpr std::int64_t kSteps = 5000;
    std::vector<char> identical(kPairs, 0);
    parallel_for(kPairs, opts.threads, [&](std::size_t i) {
        CounterRng rng = stream_rng(opts, 10, i);
        const SymmetricGame base = random_game(rng, -1.0, 1.0);
        const double a = dyadic(base.a()), b = dyadic(base.b()), c = dyadic(base.c()), d = dyadic(base.d());
        const double s = dyadic(rng.uniform(-5.0, 5.0)), r = dyadic(rng.uniform(-5.0, 5.0));
        const SymmetricGame g1(a, b, c, d);
        const SymmetricGame g2(a + s, b + s, c + r, d + r);
        const DynState init = random_init(rng);
        const double eta = rng.uniform(0.1, 5.0);

        const auto trace = [&](const SymmetricGame& g) {
            std::vector<std::uint64_t> bits;
            SimulateOptions so;
            so.stop_on_verdict = false;
            so.record_states = false;
            so.on_step = [&](const DynState&, const DynState& next) {
                bits.push_back(std::bit_cast<std::uint64_t>(next.u1));
                bits.push_back(std::bit_cast<std::uint64_t>(next.u2));
            };
            simulate(g, init, eta, kSteps, so);
            return bits;
        };
        const bool payoffs_differ = !(g1 == g2);
        const bool eps_equal = g1.eps1() == g2.eps1() && g1.eps2() == g2.eps2();
        identical[i] = payoffs_differ && eps_equal && trace(g1) == trace(g2);
    });
    const auto same = static_cast<std::size_t>(std::count(identical.begin(), identical.end(), 1));
    CriterionResult res;
    res.id = 10;
    res.title = "equal (eps1, eps2) implies bit-identical trajectories";
    res.seconds = elapsed(start);
    res.pass = same == kPairs;
    res.detail = fmt("%zu/%zu game pairs with different payoffs and equal (eps1, eps2) gave bit-identical "
                     "%lld-step trajectories",
                     same, kPairs, static_cast<long long>(kSteps));
    return res;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result) {
    using Check = CriterionResult (*)(const AcceptanceOptions&);
    static constexpr Check checks[kCriterionCount] = {
        check_same_sign_exponential,     check_opposite_delta_asymmetric, check_same_delta_two_flips,
        check_identical_init_contraction, check_oscillation_constructions, check_positive_negative_regime,
        check_zero_epsilon_regimes,       check_ce_closed_form,            check_bank_configurations,
        check_epsilon_sufficiency,
    };
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; ++id) {
        if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) continue;
        CriterionResult r;
        try {
            r = checks[id - 1](opts);
        } catch (const std::exception& e) {
            r.id = id;
            r.title = "criterion aborted";
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    return fmt("%s [#%d] %s: ", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str()) + r.detail +
           fmt(" (%.2f s)", r.seconds);
}

}  // namespace ewgame::verify

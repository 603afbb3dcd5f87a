#include "ewgame/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "ewgame/errors.hpp"

namespace ewgame {

namespace {

constexpr double kMinEpsilon = 1e-3;
constexpr int kMaxRejections = 1'000'000;

// Streams are namespaced so game draws and init draws never overlap.
constexpr std::uint64_t kGameStreamBase = 0;
constexpr std::uint64_t kInitStreamBase = std::uint64_t{1} << 40;

void require_range(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw InvalidParameter("payoff range must be finite with lo < hi");
    }
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

}  // namespace

SymmetricGame random_game(CounterRng& rng, double lo, double hi) {
    require_range(lo, hi);
    if (hi - lo <= kMinEpsilon) throw InvalidParameter("payoff range too narrow for the rejection rule");
    for (int k = 0; k < kMaxRejections; ++k) {
        const double a = rng.uniform(lo, hi), b = rng.uniform(lo, hi);
        const double c = rng.uniform(lo, hi), d = rng.uniform(lo, hi);
        SymmetricGame g(a, b, c, d);
        if (std::abs(g.eps1()) >= kMinEpsilon && std::abs(g.eps2()) >= kMinEpsilon) return g;
    }
    throw InvalidParameter("random_game: rejection sampling did not terminate");
}

SymmetricGame random_game_in_regime(CounterRng& rng, SignRegime regime, double lo, double hi) {
    require_range(lo, hi);
    if (regime == SignRegime::Degenerate) throw InvalidParameter("cannot sample degenerate games");
    for (int k = 0; k < kMaxRejections; ++k) {
        double a = rng.uniform(lo, hi), b = rng.uniform(lo, hi);
        double c = rng.uniform(lo, hi), d = rng.uniform(lo, hi);
        const bool zero1 = regime == SignRegime::ZeroNeg || regime == SignRegime::ZeroPos;
        const bool zero2 = regime == SignRegime::NegZero || regime == SignRegime::PosZero;
        if (zero1) b = a;
        if (zero2) d = c;
        SymmetricGame g(a, b, c, d);
        if (!zero1 && std::abs(g.eps1()) < kMinEpsilon) continue;
        if (!zero2 && std::abs(g.eps2()) < kMinEpsilon) continue;
        if (g.sign_regime() == regime) return g;
    }
    throw InvalidParameter("random_game_in_regime: rejection sampling did not terminate");
}

DynState random_init(CounterRng& rng) {
    const double p1 = rng.uniform(0.001, 0.999);
    const double p2 = rng.uniform(0.001, 0.999);
    return DynState{1, logit(p1), logit(p2)};
}

DynState random_init_with_pattern(CounterRng& rng, const SymmetricGame& game, DeltaPattern pattern) {
    const bool mixed = game.eps1() * game.eps2() < 0.0;
    const double shift = mixed ? log_root_ratio(game) : 0.0;
    const auto magnitude = [&] { return rng.uniform(0.05, 4.0); };
    const auto sign = [&] { return rng.uniform01() < 0.5 ? -1.0 : 1.0; };
    if (pattern == DeltaPattern::Identical) {
        const double x = mixed ? sign() * magnitude() : rng.uniform(-4.0, 4.0);
        return DynState{1, shift + x, shift + x};
    }
    if (!mixed) throw WrongRegime("Delta sign patterns need eps1 * eps2 < 0");
    const double s1 = sign();
    const double s2 = pattern == DeltaPattern::Same ? s1 : -s1;
    return DynState{1, shift + s1 * magnitude(), shift + s2 * magnitude()};
}

void SweepConfig::validate() const {
    if (game_source == GameSource::Explicit && games.empty()) {
        throw InvalidParameter("explicit game source needs at least one game");
    }
    if (game_source == GameSource::Random) {
        if (count < 1) throw InvalidParameter("count must be >= 1");
        require_range(payoff_lo, payoff_hi);
    }
    if (etas.empty()) throw InvalidParameter("at least one step size is required");
    for (double eta : etas) {
        if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidParameter("step sizes must be finite and > 0");
    }
    if (horizon < 1) throw InvalidParameter("horizon must be >= 1");
}

std::size_t SweepConfig::run_count() const {
    const std::size_t n_games = game_source == GameSource::Explicit ? games.size() : static_cast<std::size_t>(count);
    return n_games * etas.size();
}

std::size_t VerificationReport::mismatches() const noexcept {
    return static_cast<std::size_t>(std::count_if(
        runs.begin(), runs.end(), [](const RunRecord& r) { return r.agreement == Agreement::Mismatch; }));
}

RunRecord verify_run(const SymmetricGame& game, const DynState& init, double eta, std::int64_t horizon,
                     const Tolerances& tol, bool record_states, std::int64_t min_steps) {
    RunRecord rec;
    rec.game = game;
    rec.init = init;
    rec.eta = eta;
    rec.prediction = classify(game, init, eta);

    const auto envelopes = exponential_envelopes(game, init, eta);
    SimulateOptions opts;
    opts.tol = tol;
    opts.record_states = record_states;
    opts.min_steps = min_steps;
    if (!envelopes.empty()) {
        opts.on_step = [&](const DynState&, const DynState& next) {
            if (!rec.envelopes_hold) return;
            for (const Envelope& e : envelopes) {
                if (!envelope_holds(e, next, init.t)) rec.envelopes_hold = false;
            }
        };
    }
    Trajectory tr = simulate(game, init, eta, horizon, opts);
    rec.verdict = tr.verdict;
    rec.agreement = check_prediction(rec.prediction, tr.verdict);
    rec.steps = tr.steps;
    rec.two_flips = tr.two_flips;
    rec.one_flips = tr.one_flips;
    if (game.eps1() < 0.0 && game.eps2() > 0.0) {
        const double w1 = std::abs(init.u1 - init.u2);
        if (w1 > 0.0) rec.bound_n_max = two_flip_bound(game, eta, w1).n_max;
    }
    if (record_states) rec.trajectory = std::move(tr);
    return rec;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

VerificationReport run_sweep(const SweepConfig& config) {
    config.validate();
    const std::size_t n_eta = config.etas.size();
    const std::size_t n_runs = config.run_count();

    VerificationReport report;
    report.seed = config.seed;
    report.runs.resize(n_runs);

    parallel_for(n_runs, config.threads, [&](std::size_t index) {
        const std::size_t g = index / n_eta;
        const double eta = config.etas[index % n_eta];
        SymmetricGame game = config.game_source == SweepConfig::GameSource::Explicit
                                 ? config.games[g]
                                 : [&] {
                                       CounterRng rng(config.seed, kGameStreamBase + g);
                                       return random_game(rng, config.payoff_lo, config.payoff_hi);
                                   }();
        CounterRng init_rng(config.seed, kInitStreamBase + g);
        DynState init = config.init;
        switch (config.init_source) {
            case SweepConfig::InitSource::Explicit:
                break;
            case SweepConfig::InitSource::Random:
                init = random_init(init_rng);
                break;
            case SweepConfig::InitSource::Identical:
                init = random_init_with_pattern(init_rng, game, DeltaPattern::Identical);
                break;
            case SweepConfig::InitSource::EqualOpposite: {
                const double shift = game.eps1() * game.eps2() < 0.0 ? log_root_ratio(game) : 0.0;
                const double x = init_rng.uniform(0.05, 4.0);
                init = DynState{1, shift + x, shift - x};
                break;
            }
        }
        RunRecord rec = verify_run(game, init, eta, config.horizon, config.tol, config.record_states);
        rec.index = index;
        report.runs[index] = std::move(rec);
    });

    for (const RunRecord& r : report.runs) {
        RowCounts& rc = report.per_row[r.prediction.row];
        ++rc.runs;
        ++rc.agreements[r.agreement];
    }
    return report;
}

}  // namespace ewgame

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ewgame/classifier.hpp"
#include "ewgame/dynamics.hpp"
#include "ewgame/game.hpp"
#include "ewgame/rng.hpp"

namespace ewgame {

/// Draws a game with i.i.d. uniform payoffs in [lo, hi), rejecting draws with
/// |eps1| < 1e-3 or |eps2| < 1e-3. Throws InvalidParameter on a non-finite or
/// empty range, or a range too narrow to ever pass the rejection rule.
SymmetricGame random_game(CounterRng& rng, double lo, double hi);

/// Draws a game in the requested sign regime. Strict regimes are sampled by
/// rejection; eps1 == 0 (eps2 == 0) is forced by setting b = a (d = c).
/// Throws InvalidParameter for SignRegime::Degenerate.
SymmetricGame random_game_in_regime(CounterRng& rng, SignRegime regime, double lo, double hi);

/// Both p_{i,1} drawn uniformly from [0.001, 0.999).
DynState random_init(CounterRng& rng);

/// Requested signs of (Delta_1, Delta_2) at the initial state.
enum class DeltaPattern : std::uint8_t { Opposite, Same, Identical };

/// Draws an initial state whose functionals follow `pattern`, working in the
/// shifted coordinate for mixed-sign games (|u_hat| in [0.05, 4)). Identical
/// gives u1 == u2 exactly. Throws WrongRegime unless eps1 * eps2 < 0 for
/// Opposite and Same.
DynState random_init_with_pattern(CounterRng& rng, const SymmetricGame& game, DeltaPattern pattern);

struct SweepConfig {
    enum class GameSource : std::uint8_t { Explicit, Random };
    enum class InitSource : std::uint8_t { Explicit, Random, Identical, EqualOpposite };

    GameSource game_source = GameSource::Random;
    std::vector<SymmetricGame> games;
    std::uint64_t seed = 1;
    int count = 1;
    double payoff_lo = -1.0;
    double payoff_hi = 1.0;

    InitSource init_source = InitSource::Random;
    DynState init{};

    std::vector<double> etas{0.5};
    std::int64_t horizon = 1'000'000;
    Tolerances tol{};

    /// Worker threads; 0 picks the hardware concurrency.
    unsigned threads = 0;
    /// Keep thinned states so per-run CSVs can be written.
    bool record_states = false;

    /// Throws InvalidParameter when the config is inconsistent.
    void validate() const;
    std::size_t run_count() const;
};

struct RunRecord {
    std::size_t index = 0;
    SymmetricGame game{0.0, 0.0, 0.0, 0.0};
    DynState init{};
    double eta = 0.0;
    RegimePrediction prediction;
    LimitVerdict verdict;
    Agreement agreement = Agreement::Pending;
    std::int64_t steps = 0;
    std::int64_t two_flips = 0;
    std::int64_t one_flips = 0;
    std::optional<double> bound_n_max;
    /// Every exponential envelope held at every step.
    bool envelopes_hold = true;
    /// Trajectory kept when SweepConfig::record_states is set.
    std::optional<Trajectory> trajectory;
};

struct RowCounts {
    std::size_t runs = 0;
    std::map<Agreement, std::size_t> agreements;
};

struct VerificationReport {
    std::string rng_algorithm{CounterRng::kAlgorithm};
    std::uint64_t seed = 0;
    std::vector<RunRecord> runs;
    std::map<Row, RowCounts> per_row;

    std::size_t mismatches() const noexcept;
};

/// Runs one (game, init, eta) configuration: classify, simulate with stepwise
/// envelope checks, compare. The envelopes are checked for at least
/// `min_steps` steps (capped by the horizon) even if a verdict comes earlier.
RunRecord verify_run(const SymmetricGame& game, const DynState& init, double eta, std::int64_t horizon,
                     const Tolerances& tol = {}, bool record_states = false, std::int64_t min_steps = 0);

/// Expands the config into runs, executes them on a worker pool and merges the
/// results in configuration-index order.
VerificationReport run_sweep(const SweepConfig& config);

/// Applies `fn(i)` for i in [0, n) on up to `threads` workers (0 = hardware).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace ewgame

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ewgame/dynamics.hpp"
#include "ewgame/equilibria.hpp"
#include "ewgame/game.hpp"

namespace ewgame {

/// Convergence regimes r1..r10; Special covers initializations on which both
/// or exactly one Delta functional vanishes.
enum class Row : std::uint8_t { R1 = 1, R2, R3, R4, R5, R6, R7, R8, R9, R10, Special };

std::string_view to_string(Row row) noexcept;

enum class RateClass : std::uint8_t { Exponential, Asymptotic, None };

std::string_view to_string(RateClass r) noexcept;

/// Predicted limit object, possibly a set.
struct RegimePrediction {
    Row row = Row::Special;
    /// Row of the state after one step, when the initial state has exactly one
    /// vanishing functional (the second state is always non-degenerate).
    std::optional<Row> effective_row;
    /// Both functionals vanish: the dynamic never moves.
    bool stationary = false;
    /// The eps2 == 0 case was reduced to eps1 == 0 by swapping the action labels.
    bool relabeled = false;

    /// Admissible pure limits.
    std::vector<ActionPair> pure;
    /// The symmetric strictly mixed profile is an admissible limit.
    bool strict_mixed = false;
    std::optional<MixedStrategy> mixed_profile;
    /// Admissible mixed families.
    std::vector<MixedFamily> families;
    /// The specific pure limit the convergence result pins down, when it does.
    std::optional<ActionPair> expected_pair;

    RateClass rate = RateClass::None;
    /// Step-size requirement eta < eta_bound, when the row has one.
    std::optional<double> eta_bound;
    /// eta violates the requirement: nothing is predicted.
    bool no_guarantee = false;

    /// Number of admissible limit objects (families count once each).
    std::size_t set_size() const noexcept;
    /// Human-readable form of the predicted set, e.g. "{(theta1,theta2),(theta2,theta1)}".
    std::string describe() const;
};

/// Maps (game, initialization, eta) to its row and predicted limit.
/// Throws DegenerateGame and InvalidParameter (eta <= 0).
RegimePrediction classify(const SymmetricGame& game, const DynState& init, double eta);

enum class Agreement : std::uint8_t { Match, SetMatch, Pending, Mismatch, VacuousMatch };

std::string_view to_string(Agreement a) noexcept;

/// Compares a simulated verdict with a prediction. When the row pins an
/// expected pair, only that pair is a Match. VacuousMatch reports any
/// outcome outside the predicted set when the step-size requirement is
/// violated; Pending reports Undecided under an asymptotic row.
Agreement check_prediction(const RegimePrediction& prediction, const LimitVerdict& verdict);

/// Upper envelope ln p_{player, action}^{(t+1)} <= intercept + slope * t, for
/// t = 0, 1, ... steps after the initial state.
struct Envelope {
    Player player = Player::One;
    Action action = Action::Theta1;
    double intercept = 0.0;
    double slope = 0.0;

    double bound(std::int64_t t) const noexcept { return intercept + slope * static_cast<double>(t); }
};

/// Exponential decay envelopes of the rows with an exponential rate (r1, r2,
/// r3, r6, r8 and their relabelings). Empty for the other rows.
std::vector<Envelope> exponential_envelopes(const SymmetricGame& game, const DynState& init, double eta);

/// bound - observed for `state`, where t = state.t - t0. Negative means violated.
double envelope_margin(const Envelope& env, const DynState& state, std::int64_t t0) noexcept;

/// True when the margin is >= -1e-9 * max(1, |bound|).
bool envelope_holds(const Envelope& env, const DynState& state, std::int64_t t0) noexcept;

}  // namespace ewgame

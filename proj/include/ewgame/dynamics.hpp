#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ewgame/equilibria.hpp"
#include "ewgame/game.hpp"

namespace ewgame {

/// Thresholds used by the limit detector and the simulation loop.
struct Tolerances {
    /// |u| beyond which a player counts as pure (p within ~1e-20 of a vertex).
    double u_pure = 46.0;
    /// Both |u_hat| below this over a whole window => strictly mixed limit.
    double tol_mix = 1e-8;
    /// Period-2 residual threshold.
    double tol_osc = 1e-9;
    /// Number of steps between detector evaluations, and the tail length inspected.
    int window = 64;
    /// Representable band for u; leaving it raises NonFiniteState in ew_step.
    double state_cap = 1e6;
    /// A player whose |u| exceeds this, moves monotonically outward and whose
    /// geometric extrapolation predicts at least `trend_tail` further movement is
    /// treated as diverging (catches the logarithmic divergence of some rows).
    double u_trend = 10.0;
    double trend_tail = 0.1;
    /// A player whose extrapolated remaining movement is below this is frozen.
    double frozen_tail = 1e-10;
};

/// One time step of the coupled system. u_i = ln(p_i1 / p_i2) is canonical;
/// probabilities are derived on demand.
struct DynState {
    std::int64_t t = 1;
    double u1 = 0.0;
    double u2 = 0.0;

    /// Throws InvalidParameter if either strategy is pure.
    static DynState from_strategies(const MixedStrategy& s1, const MixedStrategy& s2);

    MixedStrategy p1() const noexcept { return MixedStrategy::from_log_ratio(u1); }
    MixedStrategy p2() const noexcept { return MixedStrategy::from_log_ratio(u2); }

    bool operator==(const DynState&) const = default;
};

/// ln p_{.,1} and ln p_{.,2} for log-ratio u, accurate for all finite u.
double log_prob_theta1(double u) noexcept;
double log_prob_theta2(double u) noexcept;

/// ln r* with r* = |eps2| / |eps1|; only meaningful when eps1 * eps2 < 0.
double log_root_ratio(const SymmetricGame& game);

/// Delta_1, Delta_2 at `state`.
std::pair<double, double> deltas(const SymmetricGame& game, const DynState& state) noexcept;

/// One exponential-weights step: u1 += eta * Delta_2, u2 += eta * Delta_1.
/// Throws DegenerateGame, InvalidParameter (eta <= 0 or non-finite) and
/// NonFiniteState if a coordinate leaves [-cap, cap].
DynState ew_step(const SymmetricGame& game, const DynState& state, double eta,
                 double state_cap = Tolerances{}.state_cap);

enum class FlipKind : std::uint8_t { ZeroFlip, OneFlip, TwoFlip };

std::string_view to_string(FlipKind k) noexcept;

/// Classifies the sign change of (u_hat1, u_hat2) over one step. A step that
/// lands exactly one player on 0 counts as OneFlip.
FlipKind classify_flip(double uhat1_before, double uhat2_before, double uhat1_after,
                       double uhat2_after) noexcept;

struct FlipEvent {
    /// Index of the state before the flip.
    std::int64_t t = 0;
    FlipKind kind = FlipKind::ZeroFlip;
    /// Shifted coordinates before and after the step.
    double uhat1 = 0.0, uhat2 = 0.0;
    double uhat1_next = 0.0, uhat2_next = 0.0;
};

enum class VerdictKind : std::uint8_t {
    PureNE,
    StrictMixedNE,
    MixedFamilyNE,
    PeriodTwoOscillation,
    Undecided,
};

struct LimitVerdict {
    VerdictKind kind = VerdictKind::Undecided;
    /// PureNE only.
    ActionPair pair{};
    /// StrictMixedNE and MixedFamilyNE: the limit profile.
    MixedStrategy s1{}, s2{};
    /// MixedFamilyNE only: the player that went pure.
    Player pure_player = Player::One;
    /// Diagnostic: distance to the limit or last movement, depending on kind.
    double residual = 0.0;

    /// "PureNE(theta2,theta2)", "StrictMixedNE(0.75,0.25)", ...
    std::string to_string() const;
};

/// Inspects a tail of consecutive states (at least 3) and names the limit it
/// has reached, if any.
LimitVerdict detect_limit(std::span<const DynState> tail, const SymmetricGame& game,
                          const Tolerances& tol = {});

/// Recorded row of a trajectory.
struct TrajectoryPoint {
    DynState state;
    double delta1 = 0.0;
    double delta2 = 0.0;
    /// Potentials, mixed-sign regimes only.
    std::optional<double> w, v;
    /// Kind of the transition leaving this state; empty for the final state or
    /// outside mixed-sign regimes.
    std::optional<FlipKind> flip;
};

struct Trajectory {
    /// Thinned record: every state for t <= 1000, then every 10th, plus the last.
    std::vector<TrajectoryPoint> states;
    /// OneFlip and TwoFlip events, unthinned. Mixed-sign regimes only.
    std::vector<FlipEvent> events;
    /// Unthinned W_t and V_t when SimulateOptions::record_potentials is set.
    std::vector<double> w_series, v_series;
    LimitVerdict verdict;
    /// Number of steps taken (final state index minus initial index).
    std::int64_t steps = 0;
    DynState initial;
    DynState final_state;
    std::int64_t two_flips = 0;
    std::int64_t one_flips = 0;
    /// W_t never decreased (mixed-sign regimes; vacuously true otherwise).
    bool w_nondecreasing = true;
    /// Player j of the potential W = u_hat_j - u_hat_i (larger initial ratio).
    Player w_leader = Player::One;
    /// The run stopped because a coordinate reached the state cap.
    bool hit_state_cap = false;
};

struct SimulateOptions {
    Tolerances tol{};
    /// Permit inits with Delta_1 = 0 or Delta_2 = 0.
    bool allow_degenerate_init = true;
    /// Stop as soon as detect_limit returns something other than Undecided.
    bool stop_on_verdict = true;
    /// Keep stepping (and calling on_step) for at least this many steps even
    /// after a verdict is available, so stepwise checks cover a fixed stretch.
    std::int64_t min_steps = 0;
    /// Keep the thinned state record (disable for large sweeps).
    bool record_states = true;
    bool record_potentials = false;
    /// Called after every step with (previous, next).
    std::function<void(const DynState&, const DynState&)> on_step;
};

/// Runs the dynamic for up to `horizon` steps. Throws DegenerateGame,
/// InvalidParameter (eta <= 0, horizon < 1, degenerate init when disallowed).
Trajectory simulate(const SymmetricGame& game, const DynState& init, double eta,
                    std::int64_t horizon, const SimulateOptions& options = {});

/// Bound on the number of TwoFlip events for eps1 < 0 < eps2 given W_1 > 0.
struct TwoFlipBound {
    double n_max = 0.0;
    double beta = 0.0;
    double c = 0.0;
};

/// n_max = max(0, ln(2 beta / W1) / ln(1 + C)), beta = eta * max(-eps1, eps2),
/// C = eta (eps2 - eps1) min{z/(1+z)^2 : z = r* e^{-beta}, r* e^{beta}}.
/// Throws WrongRegime unless eps1 < 0 < eps2, InvalidParameter unless W1 > 0.
TwoFlipBound two_flip_bound(const SymmetricGame& game, double eta, double w1);

/// The identical-initialization map on the shifted coordinate,
/// T(u) = u + eta (eps1 r* e^u + eps2) / (1 + r* e^u).
class ContractionMap {
public:
    /// Throws WrongRegime unless eps1 < 0 < eps2.
    ContractionMap(const SymmetricGame& game, double eta);

    double operator()(double u) const noexcept;
    double derivative(double u) const noexcept;
    /// sup |T'| over [-radius, radius].
    double lipschitz_bound(double radius) const noexcept;
    /// eta * (|eps1| + |eps2|) < 8.
    bool is_contraction() const noexcept { return eta_ * gamma_ < 8.0; }

    double eta() const noexcept { return eta_; }
    double gamma() const noexcept { return gamma_; }
    double root_ratio() const noexcept { return r_star_; }

private:
    double g(double u) const noexcept;

    double eps1_, eps2_, eta_, gamma_, r_star_;
};

struct OscillationSetup {
    SymmetricGame game;
    DynState init;
    double eta = 1.0;
};

/// eps1 = -2a coth(a/2) = -eps2, eta = 1, u1 = u2 = a; the iterates alternate
/// between a and -a. Throws InvalidParameter unless a >= 1e-8 and finite.
OscillationSetup construct_oscillation_identical(double a);

/// eps1 = 2a coth(a/2) = -eps2, eta = 1, (u1, u2) = (a, -a); u2 = -u1 forever
/// and both coordinates alternate sign. Throws InvalidParameter as above.
OscillationSetup construct_oscillation_opposite(double a);

/// Smallest r_i for which r_j stays below A forever (eps1 = 0 < eps2):
/// eta eps2 / ((1 - exp(-eta eps2 / (1 + A))) ln(A / r_j)).
double mixed_limit_ratio_bound(double eps2, double eta, double r_j, double a_cap);

/// Initial state with player 1 in the diverging role (r_1 set to the bound)
/// and player 2 starting at r_j. Throws WrongRegime unless eps1 == 0 < eps2,
/// InvalidParameter unless A > r_j > 0 and eta > 0.
DynState construct_mixed_limit_example(double r_j, double a_cap, const SymmetricGame& game,
                                       double eta);

}  // namespace ewgame

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

namespace ewgame {

enum class Action : std::uint8_t { Theta1 = 0, Theta2 = 1 };

constexpr Action other_action(Action a) noexcept {
    return a == Action::Theta1 ? Action::Theta2 : Action::Theta1;
}

std::string_view to_string(Action a) noexcept;

/// (player 1 action, player 2 action).
struct ActionPair {
    Action first = Action::Theta1;
    Action second = Action::Theta1;

    friend constexpr auto operator<=>(const ActionPair&, const ActionPair&) = default;
};

/// Swaps the labels theta1 <-> theta2 for both players.
constexpr ActionPair relabeled(ActionPair p) noexcept {
    return {other_action(p.first), other_action(p.second)};
}

/// Formats as "(theta1,theta2)".
std::string to_string(ActionPair p);

enum class Player : std::uint8_t { One = 1, Two = 2 };

constexpr Player partner(Player p) noexcept {
    return p == Player::One ? Player::Two : Player::One;
}

/// Sign pattern of (eps1, eps2), computed with exact comparisons against 0.0.
enum class SignRegime : std::uint8_t {
    NegNeg,
    PosPos,
    NegPos,
    PosNeg,
    ZeroNeg,
    ZeroPos,
    NegZero,
    PosZero,
    Degenerate,
};

std::string_view to_string(SignRegime r) noexcept;

/// Two-player, two-action symmetric game. Player 1's payoff u1(own, other) is
///
///              other=theta1  other=theta2
///   own=theta1       a             c
///   own=theta2       b             d
///
/// and player 2's matrix is the transpose, so u2(x, y) = u1(y, x) as a
/// function of (own, other). Only (eps1, eps2) = (a-b, c-d) drive the dynamics.
class SymmetricGame {
public:
    /// Throws InvalidParameter on NaN/Inf payoffs.
    SymmetricGame(double a, double b, double c, double d);

    /// Realizes the game a=eps1, b=0, c=eps2, d=0.
    static SymmetricGame from_epsilons(double eps1, double eps2);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double c() const noexcept { return c_; }
    double d() const noexcept { return d_; }

    double eps1() const noexcept { return a_ - b_; }
    double eps2() const noexcept { return c_ - d_; }

    bool is_degenerate() const noexcept { return eps1() == 0.0 && eps2() == 0.0; }

    /// Throws DegenerateGame when is_degenerate().
    void require_nondegenerate() const;

    SignRegime sign_regime() const noexcept;

    /// Player 1's payoff when playing `own` against `other`.
    double payoff(Action own, Action other) const noexcept;

    /// Same game with theta1 and theta2 swapped: (a,b,c,d) -> (d,c,b,a).
    /// Maps (eps1, eps2) to (-eps2, -eps1).
    SymmetricGame relabeled() const noexcept;

    /// Same game with every payoff shifted by k.
    SymmetricGame shifted(double k) const;

    bool operator==(const SymmetricGame&) const = default;

private:
    double a_, b_, c_, d_;
};

/// Returns (eps1, eps2) = (a - b, c - d).
std::pair<double, double> epsilon_params(const SymmetricGame& game) noexcept;

/// Probability vector over {theta1, theta2}.
class MixedStrategy {
public:
    static constexpr double kSumTolerance = 1e-12;

    MixedStrategy() = default;
    /// Throws InvalidParameter unless p1, p2 >= 0 and |p1 + p2 - 1| <= 1e-12.
    MixedStrategy(double p1, double p2);

    static MixedStrategy pure(Action a) noexcept;
    /// p1 = r / (1 + r) with r = exp(u), evaluated without overflow.
    static MixedStrategy from_log_ratio(double u) noexcept;
    /// Throws InvalidParameter unless 0 <= p1 <= 1.
    static MixedStrategy from_p1(double p1);

    double p1() const noexcept { return p1_; }
    double p2() const noexcept { return p2_; }
    double prob(Action a) const noexcept { return a == Action::Theta1 ? p1_ : p2_; }

    bool is_pure() const noexcept { return p1_ == 0.0 || p2_ == 0.0; }
    /// ln(p1 / p2); infinite for pure strategies.
    double log_ratio() const noexcept;
    /// Same distribution with the action labels swapped.
    MixedStrategy relabeled() const noexcept;

    bool operator==(const MixedStrategy&) const = default;

private:
    MixedStrategy(double p1, double p2, std::nullptr_t) noexcept : p1_(p1), p2_(p2) {}

    double p1_ = 0.5;
    double p2_ = 0.5;
};

/// Expected payoff of `player` mixing `own` against the opponent's `other`.
/// The game is symmetric, so both players share one bilinear form in
/// (own, other); player 2 reaches it through the transposed matrix.
double expected_utility(const SymmetricGame& game, Player player, const MixedStrategy& own,
                        const MixedStrategy& other) noexcept;

/// Delta(s) = s1 * eps1 + s2 * eps2: payoff advantage of theta1 over theta2
/// for a player whose opponent mixes s.
double delta_functional(const SymmetricGame& game, const MixedStrategy& s) noexcept;

/// f(r) = (eps1 * r + eps2) / (1 + r); equals delta_functional at r = p1 / p2.
double ratio_functional(double eps1, double eps2, double r) noexcept;

}  // namespace ewgame

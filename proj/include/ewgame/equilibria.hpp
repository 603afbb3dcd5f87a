#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ewgame/game.hpp"

namespace ewgame {

/// Weak-inequality slack used by every equilibrium test.
inline constexpr double kEquilibriumSlack = 1e-9;

/// A continuum of Nash equilibria in which `pure_player` commits to
/// `pure_action` and the partner may mix arbitrarily, e.g. (theta1, p).
struct MixedFamily {
    Player pure_player = Player::One;
    Action pure_action = Action::Theta1;

    bool operator==(const MixedFamily&) const = default;
};

std::string to_string(const MixedFamily& f);

struct NashSet {
    std::vector<ActionPair> pure;
    /// Symmetric strictly mixed profile (p_SE, p_SE); present iff eps1 * eps2 < 0.
    std::optional<MixedStrategy> mixed;
    std::vector<MixedFamily> mixed_families;
};

/// p_SE = (|eps2|, |eps1|) / (|eps1| + |eps2|). Throws WrongRegime unless eps1 * eps2 < 0.
MixedStrategy symmetric_mixed_equilibrium(const SymmetricGame& game);

/// Nash equilibria of a non-degenerate game, by sign regime. Throws DegenerateGame.
NashSet nash_landscape(const SymmetricGame& game);

/// Best pure-deviation gain of `player` mixing `own` against `other`.
double deviation_gain(const SymmetricGame& game, Player player, const MixedStrategy& own,
                      const MixedStrategy& other);

/// True iff neither player gains more than `tol` by deviating unilaterally.
bool verify_pure_ne(const SymmetricGame& game, ActionPair pair, double tol = 1e-12);

/// Mixed-profile version of verify_pure_ne.
bool verify_mixed_ne(const SymmetricGame& game, const MixedStrategy& s1, const MixedStrategy& s2,
                     double tol = kEquilibriumSlack);

/// Joint distribution nu(m, n) over (player 1 action, player 2 action).
class JointDistribution {
public:
    /// Throws InvalidParameter unless all entries are >= 0 and sum to 1 within 1e-12.
    JointDistribution(double nu11, double nu12, double nu21, double nu22);

    static JointDistribution point_mass(ActionPair pair);
    static JointDistribution product(const MixedStrategy& s1, const MixedStrategy& s2);

    double operator()(Action m, Action n) const noexcept {
        return nu_[static_cast<int>(m) * 2 + static_cast<int>(n)];
    }
    double nu11() const noexcept { return nu_[0]; }
    double nu12() const noexcept { return nu_[1]; }
    double nu21() const noexcept { return nu_[2]; }
    double nu22() const noexcept { return nu_[3]; }

    /// Swap theta1 <-> theta2 for both players.
    JointDistribution relabeled() const;

private:
    std::array<double, 4> nu_;
};

/// The four obedience margins of the correlated-equilibrium definition:
///   nu11*eps1 + nu12*eps2,  -(nu21*eps1 + nu22*eps2),
///   nu11*eps1 + nu21*eps2,  -(nu12*eps1 + nu22*eps2).
/// nu is a CE iff all four are >= 0.
std::array<double, 4> ce_obedience_margins(const SymmetricGame& game, const JointDistribution& nu);

/// Evaluates the obedience inequalities directly from the payoffs, with slack 1e-9.
bool ce_membership_bruteforce(const SymmetricGame& game, const JointDistribution& nu,
                              double slack = kEquilibriumSlack);

/// Closed-form CE test for the sign regime of `game`. eps2 == 0 games are
/// relabeled onto the eps1 == 0 case. Throws DegenerateGame.
bool ce_membership_closed_form(const SymmetricGame& game, const JointDistribution& nu,
                               double slack = kEquilibriumSlack);

/// Scalar comparisons made by ce_membership_closed_form, as (lhs - rhs) values
/// that must be >= -slack. Exposed for borderline detection.
std::vector<double> ce_closed_form_margins(const SymmetricGame& game, const JointDistribution& nu);

}  // namespace ewgame

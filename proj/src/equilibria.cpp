#include "ewgame/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "ewgame/errors.hpp"

namespace ewgame {

namespace {

constexpr Action T1 = Action::Theta1;
constexpr Action T2 = Action::Theta2;

NashSet relabeled(const NashSet& s) {
    NashSet out;
    for (ActionPair p : s.pure) out.pure.push_back(ewgame::relabeled(p));
    std::sort(out.pure.begin(), out.pure.end());
    if (s.mixed) out.mixed = s.mixed->relabeled();
    for (MixedFamily f : s.mixed_families) {
        out.mixed_families.push_back({f.pure_player, other_action(f.pure_action)});
    }
    return out;
}

}  // namespace

std::string to_string(const MixedFamily& f) {
    const std::string a{to_string(f.pure_action)};
    return f.pure_player == Player::One ? "(" + a + ",p)" : "(p," + a + ")";
}

MixedStrategy symmetric_mixed_equilibrium(const SymmetricGame& game) {
    const double e1 = game.eps1();
    const double e2 = game.eps2();
    if (!(e1 * e2 < 0.0)) throw WrongRegime("p_SE exists only when eps1 * eps2 < 0");
    const double total = std::abs(e1) + std::abs(e2);
    const double p1 = std::abs(e2) / total;
    return MixedStrategy::from_p1(p1);
}

NashSet nash_landscape(const SymmetricGame& game) {
    game.require_nondegenerate();
    NashSet out;
    switch (game.sign_regime()) {
        case SignRegime::NegNeg:
            out.pure = {{T2, T2}};
            break;
        case SignRegime::PosPos:
            out.pure = {{T1, T1}};
            break;
        case SignRegime::NegPos:
            out.pure = {{T1, T2}, {T2, T1}};
            out.mixed = symmetric_mixed_equilibrium(game);
            break;
        case SignRegime::PosNeg:
            out.pure = {{T1, T1}, {T2, T2}};
            out.mixed = symmetric_mixed_equilibrium(game);
            break;
        case SignRegime::ZeroNeg:
            out.pure = {{T1, T1}, {T2, T2}};
            break;
        case SignRegime::ZeroPos:
            out.pure = {{T1, T1}, {T1, T2}, {T2, T1}};
            out.mixed_families = {{Player::One, T1}, {Player::Two, T1}};
            break;
        case SignRegime::NegZero:
        case SignRegime::PosZero:
            return relabeled(nash_landscape(game.relabeled()));
        case SignRegime::Degenerate:
            throw DegenerateGame();
    }
    return out;
}

double deviation_gain(const SymmetricGame& game, Player player, const MixedStrategy& own,
                      const MixedStrategy& other) {
    const double current = expected_utility(game, player, own, other);
    double best = -INFINITY;
    for (Action a : {T1, T2}) {
        best = std::max(best, expected_utility(game, player, MixedStrategy::pure(a), other));
    }
    return best - current;
}

bool verify_pure_ne(const SymmetricGame& game, ActionPair pair, double tol) {
    const auto s1 = MixedStrategy::pure(pair.first);
    const auto s2 = MixedStrategy::pure(pair.second);
    return verify_mixed_ne(game, s1, s2, tol);
}

bool verify_mixed_ne(const SymmetricGame& game, const MixedStrategy& s1, const MixedStrategy& s2,
                     double tol) {
    return deviation_gain(game, Player::One, s1, s2) <= tol &&
           deviation_gain(game, Player::Two, s2, s1) <= tol;
}

JointDistribution::JointDistribution(double nu11, double nu12, double nu21, double nu22)
    : nu_{nu11, nu12, nu21, nu22} {
    double sum = 0.0;
    for (double v : nu_) {
        if (!(v >= 0.0)) throw InvalidParameter("joint distribution entries must be >= 0");
        sum += v;
    }
    if (!(std::abs(sum - 1.0) <= 1e-12)) throw InvalidParameter("joint distribution must sum to 1");
}

JointDistribution JointDistribution::point_mass(ActionPair pair) {
    std::array<double, 4> nu{};
    nu[static_cast<int>(pair.first) * 2 + static_cast<int>(pair.second)] = 1.0;
    return {nu[0], nu[1], nu[2], nu[3]};
}

JointDistribution JointDistribution::product(const MixedStrategy& s1, const MixedStrategy& s2) {
    return {s1.p1() * s2.p1(), s1.p1() * s2.p2(), s1.p2() * s2.p1(), s1.p2() * s2.p2()};
}

JointDistribution JointDistribution::relabeled() const {
    return {nu_[3], nu_[2], nu_[1], nu_[0]};
}

std::array<double, 4> ce_obedience_margins(const SymmetricGame& game, const JointDistribution& nu) {
    // Gain from obeying recommendation r instead of deviating to r', summed
    // over the opponent's recommendation, straight from the payoff table.
    std::array<double, 4> out{};
    int k = 0;
    for (Action rec : {T1, T2}) {
        const Action dev = other_action(rec);
        double gain = 0.0;
        for (Action n : {T1, T2}) gain += nu(rec, n) * (game.payoff(rec, n) - game.payoff(dev, n));
        out[k++] = gain;
    }
    for (Action rec : {T1, T2}) {
        const Action dev = other_action(rec);
        double gain = 0.0;
        // u2(m, n) = u1(n, m)
        for (Action m : {T1, T2}) gain += nu(m, rec) * (game.payoff(rec, m) - game.payoff(dev, m));
        out[k++] = gain;
    }
    return out;
}

bool ce_membership_bruteforce(const SymmetricGame& game, const JointDistribution& nu, double slack) {
    const auto margins = ce_obedience_margins(game, nu);
    return std::all_of(margins.begin(), margins.end(), [&](double m) { return m >= -slack; });
}

std::vector<double> ce_closed_form_margins(const SymmetricGame& game, const JointDistribution& nu) {
    const double e1 = game.eps1();
    const double e2 = game.eps2();
    switch (game.sign_regime()) {
        case SignRegime::NegNeg:
            return {-nu.nu11(), -nu.nu12(), -nu.nu21()};
        case SignRegime::PosPos:
            return {-nu.nu12(), -nu.nu21(), -nu.nu22()};
        case SignRegime::NegPos: {
            // max{(|e1|/e2) nu11, (e2/|e1|) nu22} <= min{nu12, nu21}
            const double k11 = std::abs(e1) / e2;
            const double k22 = e2 / std::abs(e1);
            const double lo = std::min(nu.nu12(), nu.nu21());
            return {lo - k11 * nu.nu11(), lo - k22 * nu.nu22()};
        }
        case SignRegime::PosNeg: {
            // nu11 >= (|e2|/e1) max{nu12, nu21} and nu22 >= (e1/|e2|) max{nu12, nu21}
            const double hi = std::max(nu.nu12(), nu.nu21());
            return {nu.nu11() - (std::abs(e2) / e1) * hi, nu.nu22() - (e1 / std::abs(e2)) * hi};
        }
        case SignRegime::ZeroNeg:
            return {-nu.nu12(), -nu.nu21()};
        case SignRegime::ZeroPos:
            return {-nu.nu22()};
        case SignRegime::NegZero:
        case SignRegime::PosZero:
            return ce_closed_form_margins(game.relabeled(), nu.relabeled());
        case SignRegime::Degenerate:
            break;
    }
    throw DegenerateGame();
}

bool ce_membership_closed_form(const SymmetricGame& game, const JointDistribution& nu, double slack) {
    const auto margins = ce_closed_form_margins(game, nu);
    return std::all_of(margins.begin(), margins.end(), [&](double m) { return m >= -slack; });
}

}  // namespace ewgame

#include "ewgame/game.hpp"

#include <cmath>
#include <limits>

#include "ewgame/errors.hpp"

namespace ewgame {

std::string_view to_string(Action a) noexcept {
    return a == Action::Theta1 ? "theta1" : "theta2";
}

std::string to_string(ActionPair p) {
    std::string out = "(";
    out += to_string(p.first);
    out += ',';
    out += to_string(p.second);
    out += ')';
    return out;
}

std::string_view to_string(SignRegime r) noexcept {
    switch (r) {
        case SignRegime::NegNeg: return "NegNeg";
        case SignRegime::PosPos: return "PosPos";
        case SignRegime::NegPos: return "NegPos";
        case SignRegime::PosNeg: return "PosNeg";
        case SignRegime::ZeroNeg: return "ZeroNeg";
        case SignRegime::ZeroPos: return "ZeroPos";
        case SignRegime::NegZero: return "NegZero";
        case SignRegime::PosZero: return "PosZero";
        case SignRegime::Degenerate: return "Degenerate";
    }
    return "?";
}

SymmetricGame::SymmetricGame(double a, double b, double c, double d) : a_(a), b_(b), c_(c), d_(d) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d)) {
        throw InvalidParameter("payoffs must be finite");
    }
}

SymmetricGame SymmetricGame::from_epsilons(double eps1, double eps2) {
    return SymmetricGame(eps1, 0.0, eps2, 0.0);
}

void SymmetricGame::require_nondegenerate() const {
    if (is_degenerate()) throw DegenerateGame();
}

SignRegime SymmetricGame::sign_regime() const noexcept {
    const double e1 = eps1();
    const double e2 = eps2();
    auto sgn = [](double x) { return x < 0.0 ? -1 : (x > 0.0 ? 1 : 0); };
    switch (sgn(e1) * 3 + sgn(e2)) {
        case -4: return SignRegime::NegNeg;
        case 4: return SignRegime::PosPos;
        case -2: return SignRegime::NegPos;
        case 2: return SignRegime::PosNeg;
        case -1: return SignRegime::ZeroNeg;
        case 1: return SignRegime::ZeroPos;
        case -3: return SignRegime::NegZero;
        case 3: return SignRegime::PosZero;
        default: return SignRegime::Degenerate;
    }
}

double SymmetricGame::payoff(Action own, Action other) const noexcept {
    if (other == Action::Theta1) return own == Action::Theta1 ? a_ : b_;
    return own == Action::Theta1 ? c_ : d_;
}

SymmetricGame SymmetricGame::relabeled() const noexcept {
    return SymmetricGame(d_, c_, b_, a_);
}

SymmetricGame SymmetricGame::shifted(double k) const {
    return SymmetricGame(a_ + k, b_ + k, c_ + k, d_ + k);
}

std::pair<double, double> epsilon_params(const SymmetricGame& game) noexcept {
    return {game.eps1(), game.eps2()};
}

MixedStrategy::MixedStrategy(double p1, double p2) : p1_(p1), p2_(p2) {
    if (!(p1 >= 0.0) || !(p2 >= 0.0) || !(std::abs(p1 + p2 - 1.0) <= kSumTolerance)) {
        throw InvalidParameter("mixed strategy must be a probability vector");
    }
}

MixedStrategy MixedStrategy::pure(Action a) noexcept {
    return a == Action::Theta1 ? MixedStrategy(1.0, 0.0, nullptr) : MixedStrategy(0.0, 1.0, nullptr);
}

MixedStrategy MixedStrategy::from_log_ratio(double u) noexcept {
    // Both halves use the logistic form so that u -> -u swaps them bit-exactly.
    return MixedStrategy(1.0 / (1.0 + std::exp(-u)), 1.0 / (1.0 + std::exp(u)), nullptr);
}

MixedStrategy MixedStrategy::from_p1(double p1) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) throw InvalidParameter("probability must lie in [0, 1]");
    return MixedStrategy(p1, 1.0 - p1, nullptr);
}

double MixedStrategy::log_ratio() const noexcept {
    if (p2_ == 0.0) return std::numeric_limits<double>::infinity();
    if (p1_ == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(p1_) - std::log(p2_);
}

MixedStrategy MixedStrategy::relabeled() const noexcept {
    return MixedStrategy(p2_, p1_, nullptr);
}

double expected_utility(const SymmetricGame& game, Player /*player*/, const MixedStrategy& own,
                        const MixedStrategy& other) noexcept {
    // u2(theta_m, theta_n) = u1(theta_n, theta_m): in (own, other) order the
    // two players evaluate the identical expression.
    double total = 0.0;
    for (Action m : {Action::Theta1, Action::Theta2}) {
        for (Action n : {Action::Theta1, Action::Theta2}) {
            total += own.prob(m) * other.prob(n) * game.payoff(m, n);
        }
    }
    return total;
}

double delta_functional(const SymmetricGame& game, const MixedStrategy& s) noexcept {
    return s.p1() * game.eps1() + s.p2() * game.eps2();
}

double ratio_functional(double eps1, double eps2, double r) noexcept {
    return (eps1 * r + eps2) / (1.0 + r);
}

}  // namespace ewgame

#include "ewgame/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "ewgame/errors.hpp"

namespace ewgame {

namespace {

constexpr Action T1 = Action::Theta1;
constexpr Action T2 = Action::Theta2;

DynState relabeled(const DynState& s) noexcept { return {s.t, -s.u1, -s.u2}; }

RegimePrediction relabeled(RegimePrediction p) {
    for (ActionPair& pair : p.pure) pair = ewgame::relabeled(pair);
    std::sort(p.pure.begin(), p.pure.end());
    if (p.mixed_profile) p.mixed_profile = p.mixed_profile->relabeled();
    for (MixedFamily& f : p.families) f.pure_action = other_action(f.pure_action);
    if (p.expected_pair) p.expected_pair = ewgame::relabeled(*p.expected_pair);
    p.relabeled = !p.relabeled;
    return p;
}

void apply_eta_requirement(RegimePrediction& p, const SymmetricGame& game, double eta) {
    const double bound = 8.0 / (std::abs(game.eps1()) + std::abs(game.eps2()));
    p.eta_bound = bound;
    // The guarantee is strict; eta == bound is treated as unsupported.
    p.no_guarantee = !(eta < bound);
}

RegimePrediction classify_nondegenerate(const SymmetricGame& game, double d1, double d2, double eta) {
    RegimePrediction p;
    switch (game.sign_regime()) {
        case SignRegime::NegNeg:
            p.row = Row::R1;
            p.pure = {{T2, T2}};
            p.expected_pair = ActionPair{T2, T2};
            p.rate = RateClass::Exponential;
            break;
        case SignRegime::PosPos:
            p.row = Row::R2;
            p.pure = {{T1, T1}};
            p.expected_pair = ActionPair{T1, T1};
            p.rate = RateClass::Exponential;
            break;
        case SignRegime::NegPos:
            p.pure = {{T1, T2}, {T2, T1}};
            if ((d1 < 0.0) != (d2 < 0.0)) {
                p.row = Row::R3;
                p.expected_pair = d1 < 0.0 ? ActionPair{T1, T2} : ActionPair{T2, T1};
                p.rate = RateClass::Exponential;
            } else if (d1 == d2) {
                p.row = Row::R5;
                p.pure.clear();
                p.strict_mixed = true;
                p.mixed_profile = symmetric_mixed_equilibrium(game);
                p.rate = RateClass::Asymptotic;
                apply_eta_requirement(p, game, eta);
            } else {
                p.row = Row::R4;
                p.rate = RateClass::Asymptotic;
            }
            break;
        case SignRegime::PosNeg:
            p.pure = {{T1, T1}, {T2, T2}};
            if ((d1 > 0.0) == (d2 > 0.0)) {
                p.row = Row::R6;
                p.expected_pair = d1 > 0.0 ? ActionPair{T1, T1} : ActionPair{T2, T2};
                p.rate = RateClass::Exponential;
            } else {
                p.row = Row::R7;
                p.strict_mixed = true;
                p.mixed_profile = symmetric_mixed_equilibrium(game);
                p.rate = RateClass::Asymptotic;
                apply_eta_requirement(p, game, eta);
            }
            break;
        case SignRegime::ZeroNeg:
            p.row = Row::R8;
            p.pure = {{T2, T2}};
            p.expected_pair = ActionPair{T2, T2};
            p.rate = RateClass::Exponential;
            break;
        case SignRegime::ZeroPos:
            p.rate = RateClass::Asymptotic;
            if (d1 == d2) {
                p.row = Row::R9;
                p.pure = {{T1, T1}};
                p.expected_pair = ActionPair{T1, T1};
            } else {
                p.row = Row::R10;
                p.families = {{Player::One, T1}, {Player::Two, T1}};
            }
            break;
        case SignRegime::NegZero:
        case SignRegime::PosZero:
        case SignRegime::Degenerate:
            throw WrongRegime("internal: unreduced sign regime");
    }
    return p;
}

bool family_contains(const MixedFamily& f, ActionPair pair) noexcept {
    return f.pure_player == Player::One ? pair.first == f.pure_action : pair.second == f.pure_action;
}

Action pure_action_of(const MixedStrategy& s) noexcept {
    return s.p1() >= s.p2() ? Action::Theta1 : Action::Theta2;
}

}  // namespace

std::string_view to_string(Row row) noexcept {
    switch (row) {
        case Row::R1: return "r1";
        case Row::R2: return "r2";
        case Row::R3: return "r3";
        case Row::R4: return "r4";
        case Row::R5: return "r5";
        case Row::R6: return "r6";
        case Row::R7: return "r7";
        case Row::R8: return "r8";
        case Row::R9: return "r9";
        case Row::R10: return "r10";
        case Row::Special: return "Special";
    }
    return "?";
}

std::string_view to_string(RateClass r) noexcept {
    switch (r) {
        case RateClass::Exponential: return "Exponential";
        case RateClass::Asymptotic: return "Asymptotic";
        case RateClass::None: return "None";
    }
    return "?";
}

std::string_view to_string(Agreement a) noexcept {
    switch (a) {
        case Agreement::Match: return "Match";
        case Agreement::SetMatch: return "SetMatch";
        case Agreement::Pending: return "Pending";
        case Agreement::Mismatch: return "Mismatch";
        case Agreement::VacuousMatch: return "VacuousMatch";
    }
    return "?";
}

std::size_t RegimePrediction::set_size() const noexcept {
    return pure.size() + (strict_mixed ? 1 : 0) + families.size();
}

std::string RegimePrediction::describe() const {
    std::string out = "{";
    bool first = true;
    const auto add = [&](const std::string& s) {
        if (!first) out += ',';
        out += s;
        first = false;
    };
    for (ActionPair pair : pure) add(to_string(pair));
    if (strict_mixed && mixed_profile) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "p_SE=(%.10g,%.10g)", mixed_profile->p1(), mixed_profile->p2());
        add(buf);
    }
    for (const MixedFamily& f : families) add(to_string(f));
    out += '}';
    return out;
}

RegimePrediction classify(const SymmetricGame& game, const DynState& init, double eta) {
    game.require_nondegenerate();
    if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidParameter("step size must be finite and > 0");

    const SignRegime regime = game.sign_regime();
    if (regime == SignRegime::NegZero || regime == SignRegime::PosZero) {
        return relabeled(classify(game.relabeled(), relabeled(init), eta));
    }

    const auto [d1, d2] = deltas(game, init);
    if (d1 == 0.0 && d2 == 0.0) {
        // Only the interior rest point of a mixed-sign game has both
        // functionals equal to zero.
        RegimePrediction p;
        p.row = Row::Special;
        p.stationary = true;
        p.rate = RateClass::None;
        if (game.eps1() * game.eps2() < 0.0) {
            p.strict_mixed = true;
            p.mixed_profile = symmetric_mixed_equilibrium(game);
        }
        return p;
    }
    if (d1 == 0.0 || d2 == 0.0) {
        RegimePrediction p = classify(game, ew_step(game, init, eta), eta);
        p.effective_row = p.row;
        p.row = Row::Special;
        return p;
    }
    return classify_nondegenerate(game, d1, d2, eta);
}

Agreement check_prediction(const RegimePrediction& prediction, const LimitVerdict& verdict) {
    const bool singleton = prediction.set_size() == 1;
    std::optional<Agreement> hit;
    switch (verdict.kind) {
        case VerdictKind::PureNE: {
            const auto& pure = prediction.pure;
            if (prediction.expected_pair) {
                // The row pins one pair; other members of the set do not count.
                if (verdict.pair == *prediction.expected_pair) hit = Agreement::Match;
            } else if (std::find(pure.begin(), pure.end(), verdict.pair) != pure.end()) {
                hit = singleton ? Agreement::Match : Agreement::SetMatch;
            } else if (std::any_of(prediction.families.begin(), prediction.families.end(),
                                   [&](const MixedFamily& f) { return family_contains(f, verdict.pair); })) {
                hit = Agreement::SetMatch;
            }
            break;
        }
        case VerdictKind::StrictMixedNE:
            if (prediction.strict_mixed) hit = singleton ? Agreement::Match : Agreement::SetMatch;
            break;
        case VerdictKind::MixedFamilyNE: {
            const MixedStrategy& pure_side = verdict.pure_player == Player::One ? verdict.s1 : verdict.s2;
            const MixedFamily f{verdict.pure_player, pure_action_of(pure_side)};
            if (std::find(prediction.families.begin(), prediction.families.end(), f) !=
                prediction.families.end()) {
                hit = Agreement::SetMatch;
            }
            break;
        }
        case VerdictKind::Undecided:
            if (!prediction.no_guarantee && prediction.rate == RateClass::Asymptotic) hit = Agreement::Pending;
            break;
        case VerdictKind::PeriodTwoOscillation:
            break;
    }
    if (hit) return *hit;
    return prediction.no_guarantee ? Agreement::VacuousMatch : Agreement::Mismatch;
}

std::vector<Envelope> exponential_envelopes(const SymmetricGame& game, const DynState& init, double eta) {
    game.require_nondegenerate();
    const SignRegime regime = game.sign_regime();
    if (regime == SignRegime::PosPos || regime == SignRegime::NegZero || regime == SignRegime::PosZero) {
        auto envs = exponential_envelopes(game.relabeled(), relabeled(init), eta);
        for (Envelope& e : envs) e.action = other_action(e.action);
        return envs;
    }

    const auto [d1, d2] = deltas(game, init);
    if (d1 == 0.0 || d2 == 0.0) return {};
    const double e1 = game.eps1();
    const double e2 = game.eps2();
    const double u[2] = {init.u1, init.u2};
    const double d[2] = {d1, d2};
    const Player players[2] = {Player::One, Player::Two};

    std::vector<Envelope> out;
    // ln p_{i,1}^{(t+1)} <= u_i + eta t kappa_j  /  ln p_{i,2}^{(t+1)} <= -u_i - eta t kappa_j
    const auto theta1_decay = [&](int i, double kappa) {
        out.push_back({players[i], T1, u[i], eta * kappa});
    };
    const auto theta2_decay = [&](int i, double kappa) {
        out.push_back({players[i], T2, -u[i], -eta * kappa});
    };

    switch (regime) {
        case SignRegime::NegNeg:
            for (int i = 0; i < 2; ++i) theta1_decay(i, std::abs(e1) < std::abs(e2) ? d[1 - i] : e2);
            break;
        case SignRegime::ZeroNeg:
            for (int i = 0; i < 2; ++i) theta1_decay(i, d[1 - i]);
            break;
        case SignRegime::NegPos:
            if (d1 < 0.0 && d2 > 0.0) {
                theta2_decay(0, d2);
                theta1_decay(1, d1);
            } else if (d1 > 0.0 && d2 < 0.0) {
                theta1_decay(0, d2);
                theta2_decay(1, d1);
            }
            break;
        case SignRegime::PosNeg:
            if (d1 > 0.0 && d2 > 0.0) {
                for (int i = 0; i < 2; ++i) theta2_decay(i, d[1 - i]);
            } else if (d1 < 0.0 && d2 < 0.0) {
                for (int i = 0; i < 2; ++i) theta1_decay(i, d[1 - i]);
            }
            break;
        default:
            break;
    }
    return out;
}

double envelope_margin(const Envelope& env, const DynState& state, std::int64_t t0) noexcept {
    const double u = env.player == Player::One ? state.u1 : state.u2;
    const double observed = env.action == Action::Theta1 ? log_prob_theta1(u) : log_prob_theta2(u);
    return env.bound(state.t - t0) - observed;
}

bool envelope_holds(const Envelope& env, const DynState& state, std::int64_t t0) noexcept {
    const double bound = env.bound(state.t - t0);
    return envelope_margin(env, state, t0) >= -1e-9 * std::max(1.0, std::abs(bound));
}

}  // namespace ewgame

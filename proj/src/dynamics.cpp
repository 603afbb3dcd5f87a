#include "ewgame/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <tuple>

#include "ewgame/errors.hpp"

namespace ewgame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int sgn(double x) noexcept { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

void require_eta(double eta) {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidParameter("step size must be finite and > 0");
}

// z / (1 + z)^2 with z = exp(x), stable for all x.
double bump(double x) noexcept { return 1.0 / (2.0 + 2.0 * std::cosh(x)); }

std::string fmt_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

// Per-player classification of a coordinate sequence.
enum class Motion { Pure, Frozen, Moving };

struct PlayerStatus {
    Motion motion = Motion::Moving;
    Action action = Action::Theta1;
    double remaining = kInf;
};

PlayerStatus player_status(std::span<const DynState> tail, bool first, const Tolerances& tol) {
    const auto x = [&](std::size_t k) { return first ? tail[k].u1 : tail[k].u2; };
    const std::size_t n = tail.size();
    const double last = x(n - 1);
    const int dir = sgn(last);

    bool outward = dir != 0;
    for (std::size_t k = 0; outward && k + 1 < n; ++k) {
        if (sgn(x(k + 1) - x(k)) != dir) outward = false;
    }

    // Geometric extrapolation of the remaining movement from the decay of the
    // step sizes across the tail.
    const double d_first = std::abs(x(1) - x(0));
    const double d_last = std::abs(x(n - 1) - x(n - 2));
    double remaining = kInf;
    if (d_last == 0.0) {
        remaining = 0.0;
    } else if (d_first > 0.0 && n > 2) {
        const double q = std::pow(d_last / d_first, 1.0 / static_cast<double>(n - 2));
        if (q < 1.0) remaining = d_last * q / (1.0 - q);
    }

    PlayerStatus s;
    s.action = dir >= 0 ? Action::Theta1 : Action::Theta2;
    s.remaining = remaining;
    const double mag = std::abs(last);
    if (outward && (mag >= tol.u_pure || (mag >= tol.u_trend && remaining >= tol.trend_tail))) {
        s.motion = Motion::Pure;
    } else if (remaining < tol.frozen_tail) {
        s.motion = Motion::Frozen;
    } else {
        s.motion = Motion::Moving;
    }
    return s;
}

// Forced verdict when the state cap is hit: both coordinates are far beyond
// any detection threshold.
LimitVerdict verdict_at_cap(const DynState& s, const SymmetricGame& game) {
    LimitVerdict v;
    const ActionPair pair{s.u1 > 0.0 ? Action::Theta1 : Action::Theta2,
                          s.u2 > 0.0 ? Action::Theta1 : Action::Theta2};
    if (verify_pure_ne(game, pair)) {
        v.kind = VerdictKind::PureNE;
        v.pair = pair;
        v.residual = std::min(std::abs(s.u1), std::abs(s.u2));
    }
    return v;
}

}  // namespace

DynState DynState::from_strategies(const MixedStrategy& s1, const MixedStrategy& s2) {
    if (s1.is_pure() || s2.is_pure()) {
        throw InvalidParameter("initial strategies must not be pure");
    }
    return DynState{1, s1.log_ratio(), s2.log_ratio()};
}

double log_prob_theta1(double u) noexcept {
    // ln(1 / (1 + e^{-u}))
    return u >= 0.0 ? -std::log1p(std::exp(-u)) : u - std::log1p(std::exp(u));
}

double log_prob_theta2(double u) noexcept { return log_prob_theta1(-u); }

double log_root_ratio(const SymmetricGame& game) {
    return std::log(std::abs(game.eps2())) - std::log(std::abs(game.eps1()));
}

std::pair<double, double> deltas(const SymmetricGame& game, const DynState& state) noexcept {
    return {delta_functional(game, state.p1()), delta_functional(game, state.p2())};
}

DynState ew_step(const SymmetricGame& game, const DynState& state, double eta, double state_cap) {
    game.require_nondegenerate();
    require_eta(eta);
    const auto [d1, d2] = deltas(game, state);
    DynState next{state.t + 1, state.u1 + eta * d2, state.u2 + eta * d1};
    if (!(std::abs(next.u1) <= state_cap) || !(std::abs(next.u2) <= state_cap)) {
        throw NonFiniteState("log-ratio left the representable band at t=" + std::to_string(next.t));
    }
    return next;
}

std::string_view to_string(FlipKind k) noexcept {
    switch (k) {
        case FlipKind::ZeroFlip: return "ZeroFlip";
        case FlipKind::OneFlip: return "OneFlip";
        case FlipKind::TwoFlip: return "TwoFlip";
    }
    return "?";
}

FlipKind classify_flip(double uhat1_before, double uhat2_before, double uhat1_after,
                       double uhat2_after) noexcept {
    const bool zero1 = uhat1_after == 0.0;
    const bool zero2 = uhat2_after == 0.0;
    if (zero1 != zero2) return FlipKind::OneFlip;
    const int crossed = (sgn(uhat1_before) * sgn(uhat1_after) < 0 ? 1 : 0) +
                        (sgn(uhat2_before) * sgn(uhat2_after) < 0 ? 1 : 0);
    switch (crossed) {
        case 2: return FlipKind::TwoFlip;
        case 1: return FlipKind::OneFlip;
        default: return FlipKind::ZeroFlip;
    }
}

std::string LimitVerdict::to_string() const {
    switch (kind) {
        case VerdictKind::PureNE:
            return "PureNE" + ewgame::to_string(pair);
        case VerdictKind::StrictMixedNE:
            return "StrictMixedNE(" + fmt_double(s1.p1()) + "," + fmt_double(s1.p2()) + ")";
        case VerdictKind::MixedFamilyNE: {
            const MixedStrategy& mixed = pure_player == Player::One ? s2 : s1;
            const Action a = pure_player == Player::One ? (s1.p1() == 1.0 ? Action::Theta1 : Action::Theta2)
                                                        : (s2.p1() == 1.0 ? Action::Theta1 : Action::Theta2);
            const std::string p = "p=" + fmt_double(mixed.p1());
            const std::string pure{ewgame::to_string(a)};
            return "MixedFamilyNE(" + (pure_player == Player::One ? pure + "," + p : p + "," + pure) + ")";
        }
        case VerdictKind::PeriodTwoOscillation:
            return "PeriodTwoOscillation";
        case VerdictKind::Undecided:
            return "Undecided";
    }
    return "?";
}

LimitVerdict detect_limit(std::span<const DynState> tail, const SymmetricGame& game,
                          const Tolerances& tol) {
    LimitVerdict v;
    const std::size_t n = tail.size();
    if (n < 3) return v;

    double max_two = 0.0;
    double min_one = kInf;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double one = std::max(std::abs(tail[k + 1].u1 - tail[k].u1),
                                    std::abs(tail[k + 1].u2 - tail[k].u2));
        min_one = std::min(min_one, one);
        if (k + 2 < n) {
            max_two = std::max(max_two, std::max(std::abs(tail[k + 2].u1 - tail[k].u1),
                                                 std::abs(tail[k + 2].u2 - tail[k].u2)));
        }
    }
    if (max_two < tol.tol_osc && min_one > 10.0 * tol.tol_osc) {
        v.kind = VerdictKind::PeriodTwoOscillation;
        v.residual = max_two;
        return v;
    }

    if (game.eps1() * game.eps2() < 0.0) {
        const double shift = log_root_ratio(game);
        double worst = 0.0;
        for (const DynState& s : tail) {
            worst = std::max({worst, std::abs(s.u1 - shift), std::abs(s.u2 - shift)});
        }
        if (worst < tol.tol_mix) {
            v.kind = VerdictKind::StrictMixedNE;
            v.s1 = v.s2 = symmetric_mixed_equilibrium(game);
            v.residual = worst;
            return v;
        }
    }

    const PlayerStatus st1 = player_status(tail, true, tol);
    const PlayerStatus st2 = player_status(tail, false, tol);
    const DynState& last = tail[n - 1];

    if (st1.motion == Motion::Pure && st2.motion == Motion::Pure) {
        const ActionPair pair{st1.action, st2.action};
        if (verify_pure_ne(game, pair)) {
            v.kind = VerdictKind::PureNE;
            v.pair = pair;
            v.residual = std::min(std::abs(last.u1), std::abs(last.u2));
        }
        return v;
    }

    const bool family1 = st1.motion == Motion::Pure && st2.motion == Motion::Frozen;
    const bool family2 = st2.motion == Motion::Pure && st1.motion == Motion::Frozen;
    if (family1 || family2) {
        const MixedStrategy s1 = family1 ? MixedStrategy::pure(st1.action) : last.p1();
        const MixedStrategy s2 = family2 ? MixedStrategy::pure(st2.action) : last.p2();
        if (verify_mixed_ne(game, s1, s2)) {
            v.kind = VerdictKind::MixedFamilyNE;
            v.s1 = s1;
            v.s2 = s2;
            v.pure_player = family1 ? Player::One : Player::Two;
            v.residual = family1 ? st2.remaining : st1.remaining;
        }
        return v;
    }

    v.residual = std::max(std::abs(last.u1 - tail[n - 2].u1), std::abs(last.u2 - tail[n - 2].u2));
    return v;
}

Trajectory simulate(const SymmetricGame& game, const DynState& init, double eta,
                    std::int64_t horizon, const SimulateOptions& options) {
    game.require_nondegenerate();
    require_eta(eta);
    if (horizon < 1) throw InvalidParameter("horizon must be >= 1");
    const Tolerances& tol = options.tol;
    if (tol.window < 2) throw InvalidParameter("detection window must be >= 2");
    if (!(std::abs(init.u1) <= tol.state_cap) || !(std::abs(init.u2) <= tol.state_cap)) {
        throw InvalidParameter("initial log-ratios must be finite and inside the state cap");
    }

    Trajectory traj;
    traj.initial = init;
    auto [d1, d2] = deltas(game, init);
    if (!options.allow_degenerate_init && (d1 == 0.0 || d2 == 0.0)) {
        throw InvalidParameter("initial functionals must both be non-zero");
    }

    const bool mixed = game.eps1() * game.eps2() < 0.0;
    const double shift = mixed ? log_root_ratio(game) : 0.0;
    traj.w_leader = init.u2 > init.u1 ? Player::Two : Player::One;
    const auto w_of = [&](const DynState& s) {
        return traj.w_leader == Player::One ? s.u1 - s.u2 : s.u2 - s.u1;
    };
    const auto v_of = [&](const DynState& s) { return std::abs(s.u1 - shift) + std::abs(s.u2 - shift); };

    const std::size_t ring_size = static_cast<std::size_t>(tol.window) + 1;
    std::vector<DynState> ring(ring_size);
    std::size_t filled = 0;
    std::size_t head = 0;  // next write position
    const auto push = [&](const DynState& s) {
        ring[head] = s;
        head = (head + 1) % ring_size;
        filled = std::min(filled + 1, ring_size);
    };
    std::vector<DynState> tail;
    tail.reserve(ring_size);
    const auto current_tail = [&]() -> std::span<const DynState> {
        tail.clear();
        const std::size_t start = (head + ring_size - filled) % ring_size;
        for (std::size_t k = 0; k < filled; ++k) tail.push_back(ring[(start + k) % ring_size]);
        return tail;
    };

    const auto record = [&](const DynState& s, double a, double b, std::optional<FlipKind> flip) {
        if (!options.record_states) return;
        TrajectoryPoint pt{s, a, b, std::nullopt, std::nullopt, flip};
        if (mixed) {
            pt.w = w_of(s);
            pt.v = v_of(s);
        }
        traj.states.push_back(pt);
    };
    const auto keep = [](std::int64_t t) { return t <= 1000 || t % 10 == 0; };

    DynState cur = init;
    push(cur);
    if (options.record_potentials && mixed) {
        traj.w_series.push_back(w_of(cur));
        traj.v_series.push_back(v_of(cur));
    }
    bool last_recorded = false;

    for (std::int64_t k = 0; k < horizon; ++k) {
        DynState next{cur.t + 1, cur.u1 + eta * d2, cur.u2 + eta * d1};
        if (!(std::abs(next.u1) <= tol.state_cap) || !(std::abs(next.u2) <= tol.state_cap)) {
            traj.hit_state_cap = true;
            break;
        }

        std::optional<FlipKind> flip;
        if (mixed) {
            const double a1 = cur.u1 - shift, a2 = cur.u2 - shift;
            const double b1 = next.u1 - shift, b2 = next.u2 - shift;
            flip = classify_flip(a1, a2, b1, b2);
            if (*flip != FlipKind::ZeroFlip) {
                traj.events.push_back({cur.t, *flip, a1, a2, b1, b2});
                (*flip == FlipKind::TwoFlip ? traj.two_flips : traj.one_flips)++;
            }
            const double w0 = w_of(cur), w1 = w_of(next);
            if (w1 < w0 - 1e-12 * std::max(1.0, std::abs(w0))) traj.w_nondecreasing = false;
            if (options.record_potentials) {
                traj.w_series.push_back(w1);
                traj.v_series.push_back(v_of(next));
            }
        }
        if (keep(cur.t)) record(cur, d1, d2, flip);
        if (options.on_step) options.on_step(cur, next);

        cur = next;
        std::tie(d1, d2) = deltas(game, cur);
        push(cur);
        ++traj.steps;

        if (options.stop_on_verdict && traj.steps >= options.min_steps && filled == ring_size &&
            traj.steps % tol.window == 0) {
            const LimitVerdict v = detect_limit(current_tail(), game, tol);
            if (v.kind != VerdictKind::Undecided) {
                traj.verdict = v;
                record(cur, d1, d2, std::nullopt);
                last_recorded = true;
                traj.final_state = cur;
                return traj;
            }
        }
    }

    if (!last_recorded) record(cur, d1, d2, std::nullopt);
    traj.final_state = cur;
    traj.verdict = detect_limit(current_tail(), game, tol);
    if (traj.hit_state_cap && traj.verdict.kind == VerdictKind::Undecided) {
        traj.verdict = verdict_at_cap(cur, game);
    }
    return traj;
}

TwoFlipBound two_flip_bound(const SymmetricGame& game, double eta, double w1) {
    const double e1 = game.eps1();
    const double e2 = game.eps2();
    if (!(e1 < 0.0 && e2 > 0.0)) throw WrongRegime("two-flip bound requires eps1 < 0 < eps2");
    require_eta(eta);
    if (!(w1 > 0.0)) throw InvalidParameter("W1 must be > 0");
    TwoFlipBound b;
    b.beta = eta * std::max(-e1, e2);
    const double ln_r = log_root_ratio(game);
    b.c = eta * (e2 - e1) * std::min(bump(ln_r - b.beta), bump(ln_r + b.beta));
    b.n_max = std::max(0.0, std::log(2.0 * b.beta / w1) / std::log1p(b.c));
    return b;
}

ContractionMap::ContractionMap(const SymmetricGame& game, double eta)
    : eps1_(game.eps1()), eps2_(game.eps2()), eta_(eta) {
    if (!(eps1_ < 0.0 && eps2_ > 0.0)) throw WrongRegime("contraction map requires eps1 < 0 < eps2");
    require_eta(eta);
    gamma_ = std::abs(eps1_) + std::abs(eps2_);
    r_star_ = eps2_ / std::abs(eps1_);
}

double ContractionMap::g(double u) const noexcept { return bump(std::log(r_star_) + u); }

double ContractionMap::operator()(double u) const noexcept {
    const MixedStrategy s = MixedStrategy::from_log_ratio(std::log(r_star_) + u);
    return u + eta_ * (eps1_ * s.p1() + eps2_ * s.p2());
}

double ContractionMap::derivative(double u) const noexcept { return 1.0 - eta_ * gamma_ * g(u); }

double ContractionMap::lipschitz_bound(double radius) const noexcept {
    const double lo = std::log(r_star_) - radius;
    const double hi = std::log(r_star_) + radius;
    const double g_max = (lo <= 0.0 && 0.0 <= hi) ? 0.25 : std::max(bump(lo), bump(hi));
    const double g_min = std::min(bump(lo), bump(hi));
    return std::max(std::abs(1.0 - eta_ * gamma_ * g_max), std::abs(1.0 - eta_ * gamma_ * g_min));
}

namespace {

double oscillation_epsilon(double a) {
    if (!std::isfinite(a) || !(a >= 1e-8)) {
        throw InvalidParameter("oscillation amplitude must be finite and >= 1e-8");
    }
    return 2.0 * a / std::tanh(a / 2.0);
}

}  // namespace

OscillationSetup construct_oscillation_identical(double a) {
    const double eps = oscillation_epsilon(a);
    return {SymmetricGame::from_epsilons(-eps, eps), DynState{1, a, a}, 1.0};
}

OscillationSetup construct_oscillation_opposite(double a) {
    const double eps = oscillation_epsilon(a);
    return {SymmetricGame::from_epsilons(eps, -eps), DynState{1, a, -a}, 1.0};
}

double mixed_limit_ratio_bound(double eps2, double eta, double r_j, double a_cap) {
    if (!(eps2 > 0.0)) throw WrongRegime("mixed-limit construction requires eps2 > 0");
    require_eta(eta);
    if (!(r_j > 0.0) || !(a_cap > r_j) || !std::isfinite(a_cap)) {
        throw InvalidParameter("mixed-limit construction requires A > r_j > 0");
    }
    const double k = eta * eps2;
    return k / (-std::expm1(-k / (1.0 + a_cap)) * std::log(a_cap / r_j));
}

DynState construct_mixed_limit_example(double r_j, double a_cap, const SymmetricGame& game,
                                       double eta) {
    if (!(game.eps1() == 0.0 && game.eps2() > 0.0)) {
        throw WrongRegime("mixed-limit construction requires eps1 == 0 < eps2");
    }
    const double r_i = mixed_limit_ratio_bound(game.eps2(), eta, r_j, a_cap);
    return DynState{1, std::log(r_i), std::log(r_j)};
}

}  // namespace ewgame

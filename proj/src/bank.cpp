#include "ewgame/bank.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "ewgame/errors.hpp"

namespace ewgame::bank {

namespace {

constexpr double kDominanceSlack = 1e-9;

// Upper tail Q(x) = 1 - Phi(x).
double normal_q(double x) noexcept { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_pdf(double x) noexcept {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_mass(double a, double b) noexcept {
    if (a >= 0.0) return normal_q(a) - normal_q(b);
    if (b <= 0.0) return normal_cdf(b) - normal_cdf(a);
    return 1.0 - normal_cdf(a) - normal_q(b);
}

CreditDistribution CreditDistribution::truncated_gaussian(double mu, double sigma) {
    if (!std::isfinite(mu) || !std::isfinite(sigma) || !(sigma > 0.0)) {
        throw InvalidParameter("truncated Gaussian needs finite mu and sigma > 0");
    }
    const double z = normal_mass(-mu / sigma, (1.0 - mu) / sigma);
    if (!(z > 1e-300)) throw InvalidParameter("truncated Gaussian has no mass on [0, 1]");
    return CreditDistribution(Kind::TruncatedGaussian, {mu, sigma, z, 0.0});
}

CreditDistribution CreditDistribution::piecewise_uniform(double beta1, double beta2, double tau_l,
                                                         double tau_h) {
    if (!(beta1 >= 0.0) || !(beta2 >= 0.0) || !(beta1 + beta2 <= 1.0)) {
        throw InvalidParameter("piecewise uniform needs beta1, beta2 >= 0 and beta1 + beta2 <= 1");
    }
    if (!(0.0 < tau_l && tau_l < tau_h && tau_h < 1.0)) {
        throw InvalidParameter("piecewise uniform needs 0 < tau_l < tau_h < 1");
    }
    return CreditDistribution(Kind::PiecewiseUniform, {beta1, beta2, tau_l, tau_h});
}

double CreditDistribution::density(double y) const noexcept {
    if (y < 0.0 || y > 1.0) return 0.0;
    if (kind_ == Kind::TruncatedGaussian) {
        return normal_pdf((y - p_[0]) / p_[1]) / (p_[1] * p_[2]);
    }
    if (y <= p_[2]) return p_[0] / p_[2];
    if (y < p_[3]) return p_[1] / (p_[3] - p_[2]);
    return (1.0 - p_[0] - p_[1]) / (1.0 - p_[3]);
}

double CreditDistribution::integrate_affine(double slope, double intercept, double lo,
                                            double hi) const noexcept {
    if (!(lo < hi)) return 0.0;
    if (kind_ == Kind::TruncatedGaussian) {
        const double mu = p_[0], sigma = p_[1], z = p_[2];
        const double a = (lo - mu) / sigma, b = (hi - mu) / sigma;
        const double mass = normal_mass(a, b);
        const double m0 = mass / z;
        // Integral of y p(y): mu * mass - sigma * (phi(b) - phi(a)), normalized.
        const double m1 = (mu * mass - sigma * (normal_pdf(b) - normal_pdf(a))) / z;
        return slope * m1 + intercept * m0;
    }
    const double edges[4] = {0.0, p_[2], p_[3], 1.0};
    double total = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double x0 = std::max(lo, edges[k]);
        const double x1 = std::min(hi, edges[k + 1]);
        if (!(x0 < x1)) continue;
        const double c = density(0.5 * (edges[k] + edges[k + 1]));
        total += c * (0.5 * slope * (x1 * x1 - x0 * x0) + intercept * (x1 - x0));
    }
    return total;
}

bool CreditDistribution::has_full_support() const noexcept {
    if (kind_ == Kind::TruncatedGaussian) return true;
    return p_[0] > 0.0 && p_[1] > 0.0 && p_[0] + p_[1] < 1.0;
}

std::string CreditDistribution::describe() const {
    char buf[160];
    if (kind_ == Kind::TruncatedGaussian) {
        std::snprintf(buf, sizeof buf, "trunc_gauss(mu=%g, sigma=%g)", p_[0], p_[1]);
    } else {
        std::snprintf(buf, sizeof buf, "piecewise_uniform(beta1=%g, beta2=%g, tau_l=%g, tau_h=%g)", p_[0],
                      p_[1], p_[2], p_[3]);
    }
    return buf;
}

double h_integral(const CreditDistribution& dist, double gamma, double tau_a, double tau_b) {
    if (!(0.0 <= tau_a && tau_a <= tau_b && tau_b <= 1.0)) {
        throw InvalidRange("h integral needs 0 <= tau_a <= tau_b <= 1");
    }
    return dist.integrate_affine(2.0 + gamma, -1.0, tau_a, tau_b);
}

std::string_view to_string(ThresholdRule r) noexcept {
    return r == ThresholdRule::Rational ? "rational" : "reciprocal";
}

ThresholdRule parse_threshold_rule(std::string_view s) {
    if (s == "rational") return ThresholdRule::Rational;
    if (s == "reciprocal") return ThresholdRule::Reciprocal;
    throw ParseError("threshold_rule must be \"rational\" or \"reciprocal\"");
}

BankParams BankParams::from_rates(double gamma_l, double gamma_h, ThresholdRule rule) {
    const auto tau = [rule](double g) {
        return rule == ThresholdRule::Rational ? 1.0 / (2.0 + g) : 1.0 / (1.0 + g);
    };
    BankParams p{gamma_l, gamma_h, tau(gamma_h), tau(gamma_l)};
    p.validate();
    return p;
}

void BankParams::validate() const {
    if (!(0.0 < gamma_l && gamma_l < gamma_h && gamma_h < 1.0)) {
        throw InvalidParameter("bank rates need 0 < gamma_l < gamma_h < 1");
    }
    if (!(0.0 <= tau_l && tau_l < tau_h && tau_h <= 1.0)) {
        throw InvalidParameter("bank thresholds need 0 <= tau_l < tau_h <= 1");
    }
}

std::string_view to_string(BankAction a) noexcept {
    switch (a) {
        case BankAction::LowTauLowRate: return "(tau_l,gamma_l)";
        case BankAction::LowTauHighRate: return "(tau_l,gamma_h)";
        case BankAction::HighTauLowRate: return "(tau_h,gamma_l)";
        case BankAction::HighTauHighRate: return "(tau_h,gamma_h)";
    }
    return "?";
}

std::pair<double, double> action_terms(const BankParams& params, BankAction a) noexcept {
    const int k = static_cast<int>(a);
    return {k < 2 ? params.tau_l : params.tau_h, k % 2 == 0 ? params.gamma_l : params.gamma_h};
}

UtilityMatrix utility_matrix_4x4(const CreditDistribution& dist, const BankParams& params) {
    params.validate();
    const double gl = params.gamma_l, gh = params.gamma_h;
    const double tl = params.tau_l, th = params.tau_h;
    const auto h = [&](double g, double a, double b) { return h_integral(dist, g, a, b); };

    const double full_ll = h(gl, tl, 1.0);  // h(gamma_l, tau_l, 1)
    const double full_hl = h(gh, tl, 1.0);  // h(gamma_h, tau_l, 1)
    const double top_l = h(gl, th, 1.0);    // h(gamma_l, tau_h, 1)
    const double top_h = h(gh, th, 1.0);    // h(gamma_h, tau_h, 1)
    const double mid_l = h(gl, tl, th);     // h(gamma_l, tau_l, tau_h)
    const double mid_h = h(gh, tl, th);     // h(gamma_h, tau_l, tau_h)

    UtilityMatrix m{};
    // own (tau_l, gamma_l)
    m[0] = {0.5 * full_ll, full_ll, mid_l + 0.5 * top_l, full_ll};
    // own (tau_l, gamma_h)
    m[1] = {0.0, 0.5 * full_hl, mid_h, mid_h + 0.5 * top_h};
    // own (tau_h, gamma_l)
    m[2] = {0.5 * top_l, top_l, 0.5 * top_l, top_l};
    // own (tau_h, gamma_h)
    m[3] = {0.0, 0.5 * top_h, 0.0, 0.5 * top_h};
    return m;
}

bool DominanceReport::all_hold() const noexcept {
    return std::all_of(inequalities.begin(), inequalities.end(), [](const auto& q) { return q.holds; });
}

bool DominanceReport::all_strict() const noexcept {
    return std::all_of(inequalities.begin(), inequalities.end(),
                       [](const auto& q) { return q.margin > kDominanceSlack; });
}

DominanceReport dominance_check(const CreditDistribution& dist, const BankParams& params) {
    const UtilityMatrix m = utility_matrix_4x4(dist, params);
    DominanceReport r;
    const auto add = [&](BankAction better, BankAction worse, BankAction opp) {
        const double margin =
            m[static_cast<int>(better)][static_cast<int>(opp)] - m[static_cast<int>(worse)][static_cast<int>(opp)];
        r.inequalities.push_back({better, worse, opp, margin, margin > -kDominanceSlack});
    };
    for (int k = 0; k < kBankActions; ++k) {
        add(BankAction::HighTauLowRate, BankAction::LowTauLowRate, static_cast<BankAction>(k));
    }
    for (int k = 1; k < kBankActions; ++k) {
        add(BankAction::LowTauHighRate, BankAction::HighTauHighRate, static_cast<BankAction>(k));
    }
    return r;
}

SymmetricGame reduce_to_2x2(const UtilityMatrix& m) noexcept {
    // theta1 = (tau_l, gamma_h) is action 1, theta2 = (tau_h, gamma_l) is action 2.
    return SymmetricGame(m[1][1], m[2][1], m[1][2], m[2][2]);
}

SymmetricGame reduce_to_2x2(const CreditDistribution& dist, const BankParams& params) {
    return reduce_to_2x2(utility_matrix_4x4(dist, params));
}

Weights normalize_log_weights(const std::array<double, kBankActions>& logw) noexcept {
    const double top = *std::max_element(logw.begin(), logw.end());
    Weights w{};
    double sum = 0.0;
    for (int k = 0; k < kBankActions; ++k) {
        w[k] = std::exp(logw[k] - top);
        sum += w[k];
    }
    for (double& x : w) x /= sum;
    return w;
}

void bank_step(const UtilityMatrix& m, std::array<double, kBankActions>& logw1,
               std::array<double, kBankActions>& logw2, double eta) noexcept {
    const Weights w1 = normalize_log_weights(logw1);
    const Weights w2 = normalize_log_weights(logw2);
    for (int k = 0; k < kBankActions; ++k) {
        double g1 = 0.0, g2 = 0.0;
        for (int n = 0; n < kBankActions; ++n) {
            g1 += m[k][n] * w2[n];
            g2 += m[k][n] * w1[n];
        }
        logw1[k] += eta * g1;
        logw2[k] += eta * g2;
    }
    // Keep the log-weights anchored so they never drift out of range.
    const double top1 = *std::max_element(logw1.begin(), logw1.end());
    const double top2 = *std::max_element(logw2.begin(), logw2.end());
    for (int k = 0; k < kBankActions; ++k) {
        logw1[k] -= top1;
        logw2[k] -= top2;
    }
}

BankExperiment run_bank_experiment(const CreditDistribution& dist, const BankParams& params,
                                   const Weights& init1, const Weights& init2, double eta,
                                   std::int64_t horizon, bool record) {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidParameter("step size must be finite and > 0");
    if (horizon < 1) throw InvalidParameter("horizon must be >= 1");
    for (const Weights* w : {&init1, &init2}) {
        double sum = 0.0;
        for (double x : *w) {
            if (!(x > 0.0)) throw InvalidParameter("initial bank weights must be > 0");
            sum += x;
        }
        if (!(std::abs(sum - 1.0) <= 1e-9)) throw InvalidParameter("initial bank weights must sum to 1");
    }

    BankExperiment ex;
    ex.matrix = utility_matrix_4x4(dist, params);
    ex.reduced = reduce_to_2x2(ex.matrix);

    std::array<double, kBankActions> l1{}, l2{};
    for (int k = 0; k < kBankActions; ++k) {
        l1[k] = std::log(init1[k]);
        l2[k] = std::log(init2[k]);
    }
    const auto keep = [](std::int64_t t) { return t <= 1000 || t % 10 == 0; };
    std::int64_t t = 1;
    if (record) ex.records.push_back({t, init1, init2});
    for (std::int64_t k = 0; k < horizon; ++k) {
        bank_step(ex.matrix, l1, l2, eta);
        ++t;
        if (record && keep(t)) ex.records.push_back({t, normalize_log_weights(l1), normalize_log_weights(l2)});
    }
    ex.steps = horizon;
    ex.final1 = normalize_log_weights(l1);
    ex.final2 = normalize_log_weights(l2);
    if (record && ex.records.back().t != t) ex.records.push_back({t, ex.final1, ex.final2});

    const auto argmax = [](const Weights& w) {
        return static_cast<BankAction>(std::max_element(w.begin(), w.end()) - w.begin());
    };
    ex.limit1 = argmax(ex.final1);
    ex.limit2 = argmax(ex.final2);
    ex.dominated_weight = std::max({ex.final1[0], ex.final1[3], ex.final2[0], ex.final2[3]});

    // 2x2 dynamic from the surviving marginals.
    if (!ex.reduced.is_degenerate()) {
        const auto marginal = [](const Weights& w) { return std::log(w[1]) - std::log(w[2]); };
        const DynState init{1, marginal(init1), marginal(init2)};
        SimulateOptions opts;
        opts.record_states = false;
        const Trajectory tr = simulate(ex.reduced, init, eta, horizon, opts);
        ex.reduced_verdict = tr.verdict;
        const auto to_theta = [](BankAction a) {
            return a == BankAction::LowTauHighRate ? Action::Theta1 : Action::Theta2;
        };
        const bool surviving = (ex.limit1 == BankAction::LowTauHighRate || ex.limit1 == BankAction::HighTauLowRate) &&
                               (ex.limit2 == BankAction::LowTauHighRate || ex.limit2 == BankAction::HighTauLowRate);
        ex.agrees_with_reduced = surviving && tr.verdict.kind == VerdictKind::PureNE &&
                                 tr.verdict.pair == ActionPair{to_theta(ex.limit1), to_theta(ex.limit2)};
    }
    return ex;
}

}  // namespace ewgame::bank

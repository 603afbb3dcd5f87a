#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ewgame/dynamics.hpp"
#include "ewgame/game.hpp"

namespace ewgame::bank {

/// Density of customer credit scores on [0, 1].
class CreditDistribution {
public:
    enum class Kind : std::uint8_t { TruncatedGaussian, PiecewiseUniform };

    /// Normal(mu, sigma) conditioned on [0, 1]. Throws InvalidParameter unless
    /// sigma > 0 and the interval carries non-negligible mass.
    static CreditDistribution truncated_gaussian(double mu, double sigma);

    /// Mass beta1 uniform on [0, tau_l], beta2 uniform on (tau_l, tau_h), the rest
    /// uniform on [tau_h, 1]. Throws InvalidParameter unless beta1, beta2 >= 0,
    /// beta1 + beta2 <= 1 and 0 < tau_l < tau_h < 1.
    static CreditDistribution piecewise_uniform(double beta1, double beta2, double tau_l, double tau_h);

    Kind kind() const noexcept { return kind_; }
    double mu() const noexcept { return p_[0]; }
    double sigma() const noexcept { return p_[1]; }
    double beta1() const noexcept { return p_[0]; }
    double beta2() const noexcept { return p_[1]; }
    double tau_l() const noexcept { return p_[2]; }
    double tau_h() const noexcept { return p_[3]; }

    double density(double y) const noexcept;

    /// Integral of (slope * y + intercept) * density over [lo, hi] (0 <= lo <= hi <= 1).
    double integrate_affine(double slope, double intercept, double lo, double hi) const noexcept;

    /// Every sub-interval of [0, 1] has positive mass.
    bool has_full_support() const noexcept;

    std::string describe() const;

private:
    CreditDistribution(Kind kind, std::array<double, 4> p) : kind_(kind), p_(p) {}

    Kind kind_;
    std::array<double, 4> p_;
};

/// Standard normal CDF, accurate in both tails.
double normal_cdf(double x) noexcept;
/// Phi(b) - Phi(a) for a <= b without cancellation in the tails.
double normal_mass(double a, double b) noexcept;

/// h(gamma, tau_a, tau_b) = integral over [tau_a, tau_b] of ((2 + gamma) y - 1) p(y) dy.
/// Throws InvalidRange unless 0 <= tau_a <= tau_b <= 1.
double h_integral(const CreditDistribution& dist, double gamma, double tau_a, double tau_b);

enum class ThresholdRule : std::uint8_t {
    /// tau(gamma) = 1 / (2 + gamma): the break-even score of a single loan.
    Rational,
    /// tau(gamma) = 1 / (1 + gamma).
    Reciprocal,
};

std::string_view to_string(ThresholdRule r) noexcept;
/// Parses "rational" or "reciprocal"; throws ParseError otherwise.
ThresholdRule parse_threshold_rule(std::string_view s);

struct BankParams {
    double gamma_l = 0.0;
    double gamma_h = 0.0;
    double tau_l = 0.0;
    double tau_h = 0.0;

    /// tau_l = tau(gamma_h), tau_h = tau(gamma_l). Throws InvalidParameter unless
    /// 0 < gamma_l < gamma_h < 1.
    static BankParams from_rates(double gamma_l, double gamma_h,
                                 ThresholdRule rule = ThresholdRule::Rational);

    /// Throws InvalidParameter unless 0 < gamma_l < gamma_h < 1 and 0 <= tau_l < tau_h <= 1.
    void validate() const;
};

/// Bank actions, in table order.
enum class BankAction : std::uint8_t { LowTauLowRate = 0, LowTauHighRate, HighTauLowRate, HighTauHighRate };

inline constexpr int kBankActions = 4;

std::string_view to_string(BankAction a) noexcept;

/// Threshold and rate of an action.
std::pair<double, double> action_terms(const BankParams& params, BankAction a) noexcept;

/// payoff[own][other]: Bank 1's utility when it plays `own` and Bank 2 plays
/// `other`. Bank 2's utility is payoff[other][own].
using UtilityMatrix = std::array<std::array<double, kBankActions>, kBankActions>;

UtilityMatrix utility_matrix_4x4(const CreditDistribution& dist, const BankParams& params);

struct DominanceInequality {
    BankAction better;
    BankAction worse;
    BankAction opponent;
    double margin = 0.0;  // u(better, opponent) - u(worse, opponent)
    bool holds = false;   // margin > -1e-9
};

struct DominanceReport {
    std::vector<DominanceInequality> inequalities;
    bool all_hold() const noexcept;
    bool all_strict() const noexcept;
};

/// (tau_h, gamma_l) beats (tau_l, gamma_l) against all four actions, and after
/// removing (tau_l, gamma_l), (tau_l, gamma_h) beats (tau_h, gamma_h) against the rest.
DominanceReport dominance_check(const CreditDistribution& dist, const BankParams& params);

/// The game on the surviving actions theta1 = (tau_l, gamma_h), theta2 = (tau_h, gamma_l).
/// Entries are copied from utility_matrix_4x4.
SymmetricGame reduce_to_2x2(const UtilityMatrix& m) noexcept;
SymmetricGame reduce_to_2x2(const CreditDistribution& dist, const BankParams& params);

using Weights = std::array<double, kBankActions>;

struct BankRecord {
    std::int64_t t = 1;
    Weights w1{}, w2{};
};

struct BankExperiment {
    UtilityMatrix matrix{};
    SymmetricGame reduced{0.0, 0.0, 0.0, 0.0};
    /// Thinned: every step for t <= 1000, then every 10th, plus the last.
    std::vector<BankRecord> records;
    Weights final1{}, final2{};
    /// argmax of the final weights.
    BankAction limit1 = BankAction::LowTauLowRate;
    BankAction limit2 = BankAction::LowTauLowRate;
    /// Largest final weight on a dominated action.
    double dominated_weight = 0.0;
    /// Verdict of the 2x2 dynamic started from the surviving marginals.
    LimitVerdict reduced_verdict;
    /// The 4-action limit restricted to surviving actions equals the 2x2 verdict.
    bool agrees_with_reduced = false;
    std::int64_t steps = 0;
};

/// Runs 4-action exponential weights in log-weight form. Throws
/// InvalidParameter unless both inits are strictly positive probability
/// vectors and eta > 0, horizon >= 1.
BankExperiment run_bank_experiment(const CreditDistribution& dist, const BankParams& params,
                                   const Weights& init1, const Weights& init2, double eta,
                                   std::int64_t horizon, bool record = true);

/// One 4-action step on log-weights; exposed for testing.
void bank_step(const UtilityMatrix& m, std::array<double, kBankActions>& logw1,
               std::array<double, kBankActions>& logw2, double eta) noexcept;

/// Softmax of log-weights.
Weights normalize_log_weights(const std::array<double, kBankActions>& logw) noexcept;

}  // namespace ewgame::bank

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ewgame/rng.hpp"

namespace ewgame::verify {

/// Outcome of one acceptance criterion.
struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    /// Measured quantities backing the verdict.
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t seed = CounterRng::kAcceptanceSeed;
    /// Worker threads; 0 picks the hardware concurrency.
    unsigned threads = 0;
    /// Criteria to run (1..10); empty runs all of them.
    std::vector<int> only;
};

/// Same-sign games: stepwise exponential decay envelopes and the predicted pure limit.
CriterionResult check_same_sign_exponential(const AcceptanceOptions& opts);
/// eps1 < 0 < eps2 with opposite-sign Delta: the predicted asymmetric pure NE and its decay bounds.
CriterionResult check_opposite_delta_asymmetric(const AcceptanceOptions& opts);
/// eps1 < 0 < eps2 with same-sign Delta: TwoFlip counts within the bound, pure asymmetric limits.
CriterionResult check_same_delta_two_flips(const AcceptanceOptions& opts);
/// eps1 < 0 < eps2 with identical inits below the step-size bound: strictly mixed limit.
CriterionResult check_identical_init_contraction(const AcceptanceOptions& opts);
/// Both period-2 oscillation constructions for a in {0.25, 1, 3}.
CriterionResult check_oscillation_constructions(const AcceptanceOptions& opts);
/// eps1 > 0 > eps2: same-sign Delta reaches a pure symmetric NE with exponential
/// envelopes; opposite-sign Delta with eta * Gamma < 4 never TwoFlips.
CriterionResult check_positive_negative_regime(const AcceptanceOptions& opts);
/// eps1 == 0: pure limits in the eps2 < 0 and identical-init eps2 > 0 cases, and
/// the mixed-limit construction's invariants.
CriterionResult check_zero_epsilon_regimes(const AcceptanceOptions& opts);
/// Closed-form correlated-equilibrium test against the obedience inequalities.
CriterionResult check_ce_closed_form(const AcceptanceOptions& opts);
/// The four bank-game configurations: sign regimes, 4-action limits and the
/// Monte Carlo table oracle.
CriterionResult check_bank_configurations(const AcceptanceOptions& opts);
/// Games with equal (eps1, eps2) produce bit-identical trajectories.
CriterionResult check_epsilon_sufficiency(const AcceptanceOptions& opts);

/// Runs the selected criteria in order, reporting each through `on_result`
/// as soon as it finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS [#3] title: detail (1.23 s)".
std::string format_result(const CriterionResult& r);

inline constexpr int kCriterionCount = 10;

}  // namespace ewgame::verify

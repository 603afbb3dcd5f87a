#pragma once

#include <cstdint>
#include <functional>

#include "ewgame/bank.hpp"

namespace ewgame::verify {

/// Sample mean and standard error of every utility-table entry.
struct MonteCarloTable {
    bank::UtilityMatrix mean{};
    bank::UtilityMatrix std_error{};
    std::uint64_t samples = 0;
};

/// Estimates the 4x4 utility table by sampling customers one by one and
/// applying the allocation rules directly: a customer qualifying at only one
/// bank borrows there, one qualifying at both borrows at the lower rate (ties
/// split evenly), and a customer qualifying nowhere is rejected. A loan at rate
/// gamma to score y earns (2 + gamma) y - 1 in expectation. Independent of the
/// h-integral code path; uses std::mt19937_64 and rejection sampling for the
/// truncated Gaussian.
MonteCarloTable monte_carlo_utility_table(const bank::CreditDistribution& dist, const bank::BankParams& params,
                                          std::uint64_t samples, std::uint64_t seed);

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance `tol`.
/// Throws InvalidRange if a > b.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 50);

/// h(gamma, tau_a, tau_b) by quadrature of the density, as a cross-check of the
/// closed form.
double h_integral_quadrature(const bank::CreditDistribution& dist, double gamma, double tau_a, double tau_b,
                             double tol = 1e-12);

}  // namespace ewgame::verify

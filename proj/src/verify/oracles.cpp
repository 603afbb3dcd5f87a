#include "ewgame/oracles.hpp"

#include <cmath>
#include <random>

#include "ewgame/errors.hpp"

namespace ewgame::verify {

namespace {

using bank::BankAction;
using bank::CreditDistribution;

double sample_score(const CreditDistribution& dist, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (dist.kind() == CreditDistribution::Kind::TruncatedGaussian) {
        std::normal_distribution<double> normal(dist.mu(), dist.sigma());
        for (;;) {
            const double y = normal(gen);
            if (y >= 0.0 && y <= 1.0) return y;
        }
    }
    const double u = unit(gen);
    const double v = unit(gen);
    if (u < dist.beta1()) return v * dist.tau_l();
    if (u < dist.beta1() + dist.beta2()) return dist.tau_l() + v * (dist.tau_h() - dist.tau_l());
    return dist.tau_h() + v * (1.0 - dist.tau_h());
}

/// Bank 1's expected profit from one customer with score y.
double customer_profit(double y, double tau1, double gamma1, double tau2, double gamma2) {
    const bool q1 = y >= tau1;
    const bool q2 = y >= tau2;
    if (!q1) return 0.0;
    const double loan = (2.0 + gamma1) * y - 1.0;
    if (!q2) return loan;
    if (gamma1 < gamma2) return loan;
    if (gamma1 > gamma2) return 0.0;
    return 0.5 * loan;
}

double simpson(double fa, double fm, double fb, double a, double b) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(fa, flm, fm, a, m);
    const double right = simpson(fm, frm, fb, m, b);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

MonteCarloTable monte_carlo_utility_table(const CreditDistribution& dist, const bank::BankParams& params,
                                          std::uint64_t samples, std::uint64_t seed) {
    if (samples < 2) throw InvalidParameter("Monte Carlo needs at least two samples");
    std::mt19937_64 gen(seed);
    std::array<std::pair<double, double>, bank::kBankActions> terms{};
    for (int k = 0; k < bank::kBankActions; ++k) terms[k] = bank::action_terms(params, static_cast<BankAction>(k));

    bank::UtilityMatrix sum{}, sum_sq{};
    for (std::uint64_t s = 0; s < samples; ++s) {
        const double y = sample_score(dist, gen);
        for (int own = 0; own < bank::kBankActions; ++own) {
            for (int other = 0; other < bank::kBankActions; ++other) {
                const double x =
                    customer_profit(y, terms[own].first, terms[own].second, terms[other].first, terms[other].second);
                sum[own][other] += x;
                sum_sq[own][other] += x * x;
            }
        }
    }
    MonteCarloTable out;
    out.samples = samples;
    const double n = static_cast<double>(samples);
    for (int own = 0; own < bank::kBankActions; ++own) {
        for (int other = 0; other < bank::kBankActions; ++other) {
            const double mean = sum[own][other] / n;
            const double var = std::max(0.0, (sum_sq[own][other] / n - mean * mean) * n / (n - 1.0));
            out.mean[own][other] = mean;
            out.std_error[own][other] = std::sqrt(var / n);
        }
    }
    return out;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int max_depth) {
    if (a > b) throw InvalidRange("adaptive_simpson: a > b");
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return simpson_rec(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, max_depth);
}

double h_integral_quadrature(const CreditDistribution& dist, double gamma, double tau_a, double tau_b, double tol) {
    if (!(0.0 <= tau_a && tau_a <= tau_b && tau_b <= 1.0)) throw InvalidRange("h_integral_quadrature: bad range");
    const auto integrand = [&](double y) { return ((2.0 + gamma) * y - 1.0) * dist.density(y); };
    if (dist.kind() == CreditDistribution::Kind::TruncatedGaussian) {
        return adaptive_simpson(integrand, tau_a, tau_b, tol);
    }
    // Integrate segment by segment so the density jumps sit on panel edges.
    double total = 0.0;
    const double edges[] = {0.0, dist.tau_l(), dist.tau_h(), 1.0};
    for (int k = 0; k < 3; ++k) {
        const double lo = std::max(tau_a, edges[k]);
        const double hi = std::min(tau_b, edges[k + 1]);
        if (lo < hi) {
            const double mid = 0.5 * (lo + hi);
            const double dens = dist.density(mid);
            total += adaptive_simpson([&](double y) { return ((2.0 + gamma) * y - 1.0) * dens; }, lo, hi, tol);
        }
    }
    return total;
}

}  // namespace ewgame::verify

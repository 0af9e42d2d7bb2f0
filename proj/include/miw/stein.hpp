#pragma once

// Discrete Stein kernel of a recursion solution and the two-term Wasserstein
// upper bound built from it.

#include <miw/error.hpp>
#include <miw/radial.hpp>
#include <miw/specfn.hpp>
#include <miw/target.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace miw {

/// tau_N(x_i) = (x_i - x_{i+1}) * sum_{j<=i} x_j for i < N, and 0 at i = N.
inline std::vector<double> tau_discrete(const RadialSolution& sol) {
    const auto& x = sol.points();
    const std::size_t n = x.size();
    std::vector<double> tau(n, 0.0);
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(x[i] > x[i + 1])) throw domain_error("tau_discrete: points must be strictly decreasing");
        partial += x[i];
        tau[i] = (x[i] - x[i + 1]) * partial;
    }
    return tau;
}

struct BoundReport {
    int k = 0;
    int n_points = 0;
    double term_kernel_mismatch = 0.0;  // (1/N) sum |tau - tau_N| Psi1
    double term_gap = 0.0;              // (1/N) sum |x_i - x_{i+1}| tau_N max(Psi2)
    double total_bound = 0.0;
    std::optional<double> exact_w1;
    std::optional<double> coupling_bound;
    std::optional<double> inverse_moment_l1;

    /// True when no exact distance is attached or it does not exceed the bound.
    [[nodiscard]] bool dominates() const { return !exact_w1 || *exact_w1 <= total_bound; }
};

/// Per-index contributions of the two bound terms (already divided by N).
struct BoundTerms {
    std::vector<double> kernel_mismatch;
    std::vector<double> gap;
};

inline BoundTerms bound_terms(const RadialSolution& sol, const TiltedGaussianTarget& t) {
    if (sol.k() != t.k())
        throw domain_error("wasserstein_bound: solution k=" + std::to_string(sol.k()) +
                           " does not match target k=" + std::to_string(t.k()));
    const auto& x = sol.points();
    const std::size_t n = x.size();
    if (n < 2) throw domain_error("wasserstein_bound: need at least two points");
    const double mean_defect = std::abs(pairwise_sum(x));
    if (mean_defect > 1e-9 * static_cast<double>(n))
        throw domain_error("wasserstein_bound: solution is not zero-mean");
    const auto tau_n = tau_discrete(sol);
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> p2(n);
    for (std::size_t i = 0; i < n; ++i) p2[i] = psi2(t, x[i]);
    BoundTerms out;
    out.kernel_mismatch.resize(n);
    out.gap.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double tau = stein_kernel(t, x[i]);
        out.kernel_mismatch[i] = inv_n * std::abs(tau - tau_n[i]) * psi1(t, x[i]);
        if (i + 1 < n) out.gap[i] = inv_n * (x[i] - x[i + 1]) * tau_n[i] * std::max(p2[i], p2[i + 1]);
    }
    return out;
}

/// Certified upper bound on d_W(empirical law of sol, target).
inline BoundReport wasserstein_bound(const RadialSolution& sol, const TiltedGaussianTarget& t) {
    const BoundTerms terms = bound_terms(sol, t);
    BoundReport r;
    r.k = sol.k();
    r.n_points = sol.n_points();
    r.term_kernel_mismatch = pairwise_sum(terms.kernel_mismatch);
    r.term_gap = pairwise_sum(terms.gap);
    r.total_bound = r.term_kernel_mismatch + r.term_gap;
    return r;
}

}  // namespace miw

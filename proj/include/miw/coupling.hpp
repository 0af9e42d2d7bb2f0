#pragma once

// The k-radial-bias transform F* of a recursion solution, the comonotone (quantile)
// coupling of F and F*, and the coupling-based Wasserstein bounds evaluated exactly
// under that coupling.

#include <miw/error.hpp>
#include <miw/radial.hpp>
#include <miw/specfn.hpp>
#include <miw/target.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace miw {

/// a_j(k) = 2^j Gamma(1 + k/2) / Gamma(1 + k/2 - j), as the falling product 2^j prod_{i<j}(k/2 - i).
/// Zero beyond j = ceil(k/2), the last index used by the kernel expansion.
inline double a_coefficient(int j, int k) {
    if (j < 0 || k < 0) throw domain_error("a_coefficient: j and k must be nonnegative");
    if (j > (k + 1) / 2) return 0.0;
    double v = 1.0;
    for (int i = 0; i < j; ++i) v *= 2.0 * (0.5 * k - i);
    return v;
}

/// Odd-k remainder of the kernel expansion: e^{x^2/2} |x|^{-k} Gamma(1/2, x^2/2); zero for even k.
inline double epsilon_remainder(int k, double x) {
    if (k < 0) throw domain_error("epsilon_remainder: k must be nonnegative");
    if (k % 2 == 0) return 0.0;
    if (x == 0.0) throw domain_error("epsilon_remainder: diverges at x = 0");
    const double ax = std::abs(x);
    return std::pow(ax, -k) * scaled_upper_gamma(0.5, 0.5 * x * x);
}

/// Density proportional to |x|^k S_n on (x_{n+1}, x_n], S_n = sum_{i<=n} x_i / |x_i|^k.
class BiasTransform {
public:
    explicit BiasTransform(RadialSolution base) : base_(std::move(base)) {
        const auto& x = base_.points();
        const int k = base_.k();
        const std::size_t n = x.size();
        if (n < 2) throw domain_error("BiasTransform: need at least two points");
        double s = 0.0;
        std::vector<double> raw;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!(x[i] > x[i + 1])) throw domain_error("BiasTransform: points must be strictly decreasing");
            if (k >= 1 && x[i] == 0.0) throw domain_error("BiasTransform: zero point with k >= 1");
            s += detail::tilt_weight(x[i], k);
            if (!(s > 0.0)) throw domain_error("BiasTransform: partial tilt sums must be positive");
            weight_.push_back(s);
            raw.push_back(s * (big_b(x[i], k) - big_b(x[i + 1], k)));
        }
        norm_ = pairwise_sum(raw);
        double c = 0.0;
        for (double r : raw) {
            cumulative_.push_back(c);
            mass_.push_back(r / norm_);
            c += r / norm_;
        }
    }

    [[nodiscard]] const RadialSolution& base() const noexcept { return base_; }
    [[nodiscard]] int k() const noexcept { return base_.k(); }
    [[nodiscard]] std::size_t intervals() const noexcept { return mass_.size(); }
    /// Mass of (x_{n+1}, x_n], n = 0-based interval index from the top.
    [[nodiscard]] double interval_mass(std::size_t n) const { return mass_.at(n); }
    /// Mass above interval n.
    [[nodiscard]] double mass_above(std::size_t n) const { return cumulative_.at(n); }

    /// Density on interval n evaluated at y (no interval lookup).
    [[nodiscard]] double piece_density(std::size_t n, double y) const {
        return weight_[n] * std::pow(std::abs(y), k()) / norm_;
    }

    [[nodiscard]] double density(double y) const {
        const auto& x = base_.points();
        if (y > x.front() || y <= x.back()) return 0.0;
        // First index with x[i] < y; the interval is (x[i], x[i-1]].
        const auto it = std::partition_point(x.begin(), x.end(), [y](double v) { return v >= y; });
        return piece_density(static_cast<std::size_t>(it - x.begin()) - 1, y);
    }

    /// Point of interval n with mass w in [0, mass_n] above it.
    [[nodiscard]] double point_below(std::size_t n, double w) const {
        const auto& x = base_.points();
        const double b = big_b(x[n], k()) - w * norm_ / weight_[n];
        return std::clamp(big_b_inverse(b, k()), x[n + 1], x[n]);
    }

private:
    RadialSolution base_;
    std::vector<double> weight_;
    std::vector<double> mass_;
    std::vector<double> cumulative_;
    double norm_ = 1.0;
};

/// E phi(F, F*) under the quantile coupling: F uniform on the points, F* with the bias density,
/// both ordered from the top. Computed piece by piece with adaptive quadrature.
template <class Phi>
double coupled_expectation(const BiasTransform& bt, Phi&& phi, const QuadratureSpec& spec = {}) {
    const auto& x = bt.base().points();
    const std::size_t n = x.size();
    const double cell = 1.0 / static_cast<double>(n);
    std::vector<double> parts;
    std::size_t iv = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u_lo = static_cast<double>(i) * cell;
        const double u_hi = i + 1 == n ? 1.0 : static_cast<double>(i + 1) * cell;
        while (iv + 1 < bt.intervals() && bt.mass_above(iv + 1) <= u_lo) ++iv;
        for (std::size_t q = iv; q < bt.intervals(); ++q) {
            const double top = bt.mass_above(q);
            const double bottom = q + 1 == bt.intervals() ? 1.0 : bt.mass_above(q + 1);
            if (top >= u_hi) break;
            const double w0 = std::max(u_lo, top) - top;
            const double w1 = std::min(u_hi, bottom) - top;
            if (w1 <= w0) continue;
            const double y_hi = bt.point_below(q, w0);
            const double y_lo = bt.point_below(q, std::min(w1, bt.interval_mass(q)));
            if (y_hi <= y_lo) continue;
            const double xi = x[i];
            auto f = [&](double y) { return phi(xi, y) * bt.piece_density(q, y); };
            parts.push_back(integrate_with_breaks(f, y_lo, y_hi, {0.0, xi, -xi}, spec).value);
        }
    }
    return pairwise_sum(parts);
}

namespace detail {

// Signed integer power, negative exponents allowed.
inline double ipow(double x, int p) {
    if (p >= 0) return std::pow(x, p);
    return 1.0 / std::pow(x, -p);
}

}  // namespace detail

struct GapBound {
    double exact = 0.0;     // E|F - F*| under the quantile coupling
    double envelope = 0.0;  // (1/(N-1)) sum |x_n - x_{n+1}| = (x_1 - x_N)/(N-1)
};

inline GapBound coupled_gap_bound(const BiasTransform& bt) {
    const auto& x = bt.base().points();
    GapBound g;
    g.exact = coupled_expectation(bt, [](double a, double b) { return std::abs(a - b); });
    g.envelope = (x.front() - x.back()) / static_cast<double>(x.size() - 1);
    return g;
}

struct InverseMomentGap {
    double exact = 0.0;        // E|F^{-l} - F*^{-l}|
    double central = 0.0;      // central-interval term
    double telescoping = 0.0;  // (2/(N-1)) sum over the positive side of (1/x_{n+1}^l - 1/x_n^l)
    double envelope = 0.0;     // central + telescoping
};

inline InverseMomentGap inverse_moment_gap(const BiasTransform& bt, int l) {
    const int k = bt.k();
    if (l < 0) throw domain_error("inverse_moment_gap: l must be nonnegative");
    if (l > k) throw domain_error("inverse_moment_gap: l must not exceed k");
    InverseMomentGap g;
    if (l == 0) return g;
    const auto& x = bt.base().points();
    for (double v : x)
        if (v == 0.0) throw domain_error("inverse_moment_gap: zero point");
    g.exact = coupled_expectation(
        bt, [l](double a, double b) { return std::abs(detail::ipow(a, -l) - detail::ipow(b, -l)); });
    const std::size_t m = x.size() / 2;
    const double n1 = static_cast<double>(x.size() - 1);
    const double xm = x[m - 1];
    // 2(k+1)/(x_m^{k+1}(N-1)) * integral_0^{x_m} (t^{-l} - x_m^{-l}) t^k dt, in closed form.
    g.central = 2.0 / n1 * std::pow(xm, -l) * l / (k - l + 1.0);
    std::vector<double> steps;
    for (std::size_t i = 0; i + 1 < m; ++i) steps.push_back(std::pow(x[i + 1], -l) - std::pow(x[i], -l));
    g.telescoping = 2.0 / n1 * pairwise_sum(steps);
    g.envelope = g.central + g.telescoping;
    return g;
}

struct CouplingBound {
    double value = 0.0;
    bool beyond_proven_range = false;  // k > 7
    std::string form;                  // which inequality was evaluated
};

/// Even/odd general-k form (k >= 2).
inline double theorem_coupling_bound(const BiasTransform& bt) {
    const int k = bt.k();
    if (k < 2 || k > 8) throw domain_error("theorem_coupling_bound: k must be in 2..8");
    std::vector<double> a(static_cast<std::size_t>(k + 2));
    for (int j = 0; j <= k + 1; ++j) a[static_cast<std::size_t>(j)] = a_coefficient(j, k);
    using detail::ipow;
    auto phi = [k, &a](double f, double g) {
        const double gap = std::abs(f - g), af = std::abs(f), ag = std::abs(g);
        double s = 0.0;
        if (k % 2 == 0) {
            const int ell = k / 2;
            for (int j = 0; j <= ell; ++j)
                s += a[static_cast<std::size_t>(ell - j)] *
                     (std::abs(ipow(f, 2 * j) - ipow(g, 2 * j)) + 2.0 * ipow(af, 2 * j) * gap);
            for (int j = 1; j <= ell; ++j)
                s += a[static_cast<std::size_t>(j)] *
                     (std::abs(ipow(f, 1 - 2 * j) - ipow(g, 1 - 2 * j)) + ipow(af, 1 - 2 * j) * gap);
        } else {
            const int ell = (k + 1) / 2;
            for (int j = 1; j <= ell; ++j)
                s += a[static_cast<std::size_t>(ell - j)] *
                     (std::abs(ipow(f, 2 * j - 1) - ipow(g, 2 * j - 1)) + 2.0 * ipow(af, 2 * j - 1) * gap);
            for (int j = 1; j <= ell - 1; ++j)
                s += a[static_cast<std::size_t>(j)] *
                     (std::abs(ipow(f, 1 - 2 * j) - ipow(g, 1 - 2 * j)) + ipow(af, 1 - 2 * j) * gap);
            const double al = 3.0 * a[static_cast<std::size_t>(ell)];
            s += al * (2.0 + 2.0 * ipow(af, -2 * (ell - 1)) + ipow(ag, -2 * (ell - 1))) * gap;
            s += al * (af + ipow(af, 2 * ell - 1)) * std::abs(ipow(f, 1 - 2 * ell) - ipow(g, 1 - 2 * ell));
        }
        return s;
    };
    return coupled_expectation(bt, phi);
}

/// Coupling bound on d_W(F_N, target): specialised forms for k = 1, 2, 3, the general form for 4..8.
inline CouplingBound coupling_wasserstein_bound(const BiasTransform& bt) {
    const int k = bt.k();
    if (k < 1 || k > 8) throw domain_error("coupling_wasserstein_bound: k must be in 1..8");
    CouplingBound out;
    out.beyond_proven_range = k > 7;
    if (k == 1) {
        out.form = "k1";
        out.value = coupled_expectation(bt, [](double f, double g) { return (5.0 + 2.0 * std::abs(f)) * std::abs(f - g); });
    } else if (k == 2) {
        out.form = "k2";
        out.value = coupled_expectation(bt, [](double f, double g) {
            const double af = std::abs(f), ag = std::abs(g);
            return (3.0 + 2.0 * af + 2.0 / af + 2.0 / (af * ag)) * std::abs(f - g);
        });
    } else if (k == 3) {
        out.form = "k3";
        out.value = coupled_expectation(bt, [](double f, double g) {
            const double af = std::abs(f), ag = std::abs(g), gap = std::abs(f - g);
            const double poly = 21.0 + 6.0 * af + 2.0 * f * f + 3.0 / af + 18.0 / (f * f) + 9.0 / (g * g) +
                                3.0 / (af * ag);
            return poly * gap + std::abs(f * f - g * g) +
                   9.0 * (af + af * af * af) * std::abs(1.0 / (f * f * f) - 1.0 / (g * g * g));
        });
    } else {
        out.form = "theorem";
        out.value = theorem_coupling_bound(bt);
    }
    return out;
}

/// k = 1 envelope (5 + 2 x_1) 2 x_1 / (N - 1).
inline double k1_coupling_envelope(const RadialSolution& sol) {
    const double x1 = sol.points().front();
    return (5.0 + 2.0 * x1) * 2.0 * x1 / static_cast<double>(sol.n_points() - 1);
}

}  // namespace miw

#pragma once

// One-dimensional ground states: the symmetric strictly decreasing solution of
//   B(x_{n+1}) = B(x_n) - 1 / sum_{i<=n} x_i / |x_i|^k,   B(x) = sign(x)|x|^{k+1}/(k+1),
// found by shooting on x_1 against the zero-median residual x_m + x_{m+1}.

#include <miw/error.hpp>
#include <miw/specfn.hpp>
#include <miw/target.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace miw {

inline constexpr int kDefaultMaxPoints = 20000;

/// |r|^d sign(r).
inline double signed_power(double r, int d) {
    if (d < 1) throw domain_error("signed_power: exponent must be a positive integer");
    const double a = std::abs(r);
    double p = 1.0;
    switch (d) {
        case 1: p = a; break;
        case 2: p = a * a; break;
        case 3: p = a * a * a; break;
        default: p = std::pow(a, d);
    }
    return std::copysign(p, r);
}

/// B(x) = sign(x)|x|^{k+1}/(k+1), the antiderivative of |x|^k.
inline double big_b(double x, int k) {
    if (k < 0) throw domain_error("big_b: k must be nonnegative");
    return signed_power(x, k + 1) / (k + 1);
}

inline double big_b_inverse(double y, int k) {
    if (k < 0) throw domain_error("big_b_inverse: k must be nonnegative");
    const double a = (k + 1) * std::abs(y);
    double r = 0.0;
    switch (k) {
        case 0: r = a; break;
        case 1: r = std::sqrt(a); break;
        case 2: r = std::cbrt(a); break;
        default: r = std::pow(a, 1.0 / (k + 1));
    }
    return std::copysign(r, y);
}

namespace detail {

// x / |x|^k.
inline double tilt_weight(double x, int k) {
    switch (k) {
        case 0: return x;
        case 1: return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
        case 2: return 1.0 / x;
        default: return std::copysign(std::pow(std::abs(x), 1 - k), x);
    }
}

}  // namespace detail

/// Next point of the recursion given the prefix x_1..x_n.
inline double recursion_step(std::span<const double> prefix, int k) {
    if (prefix.empty()) throw domain_error("recursion_step: empty prefix");
    if (k < 0) throw domain_error("recursion_step: k must be nonnegative");
    std::vector<double> w;
    w.reserve(prefix.size());
    for (double x : prefix) {
        if (k >= 1 && x == 0.0) throw numerical_error("zero-point", "recursion_step: zero point with k >= 1");
        w.push_back(detail::tilt_weight(x, k));
    }
    const double s = pairwise_sum(w);
    if (s == 0.0) throw numerical_error("singular-sum", "recursion_step: denominator sum is zero");
    return big_b_inverse(big_b(prefix.back(), k) - 1.0 / s, k);
}

/// Immutable point sequence x_1 > ... > x_N for tilt exponent k.
class RadialSolution {
public:
    RadialSolution(int k, std::vector<double> points, double residual = 0.0, bool shooting_monotone = true)
        : k_(k), points_(std::move(points)), residual_(residual), shooting_monotone_(shooting_monotone) {
        if (k < 0) throw domain_error("RadialSolution: k must be nonnegative");
        if (points_.empty()) throw domain_error("RadialSolution: empty point sequence");
    }

    [[nodiscard]] int k() const noexcept { return k_; }
    [[nodiscard]] int n_points() const noexcept { return static_cast<int>(points_.size()); }
    /// m = N/2 (1-based index of the last positive point).
    [[nodiscard]] int median_index() const noexcept { return n_points() / 2; }
    [[nodiscard]] const std::vector<double>& points() const noexcept { return points_; }
    [[nodiscard]] double operator[](std::size_t i) const { return points_[i]; }
    /// |x_m + x_{m+1}| at the accepted shot.
    [[nodiscard]] double residual() const noexcept { return residual_; }
    /// False if the sampled shooting map was seen to be non-monotone.
    [[nodiscard]] bool shooting_monotone() const noexcept { return shooting_monotone_; }

private:
    int k_;
    std::vector<double> points_;
    double residual_;
    bool shooting_monotone_;
};

struct RadialOptions {
    double tol = 1e-12;
    int max_iterations = 200;
    int max_points = kDefaultMaxPoints;
};

namespace detail {

struct Shot {
    double x1 = 0.0;
    bool low = false;  // classified as "x_1 too small" without a usable residual
    double residual = 0.0;
    std::vector<double> half;  // x_1 .. x_{m+1}
    [[nodiscard]] double signed_residual() const {
        return low ? -std::numeric_limits<double>::infinity() : residual;
    }
};

// Runs m steps of x_{n+1} = next(x_n, S_n), S_n = sum of weight(x_i).
template <class Next, class Weight>
Shot shoot_once(double x1, int m, int k, Next& next, Weight& weight, bool& zero_hit) {
    Shot shot;
    shot.x1 = x1;
    shot.half.reserve(static_cast<std::size_t>(m) + 1);
    shot.half.push_back(x1);
    double s = weight(x1);
    zero_hit = false;
    for (int n = 1; n <= m; ++n) {
        const double xn = shot.half.back();
        if (!(s > 0.0)) {
            shot.low = true;
            return shot;
        }
        const double xnext = next(xn, s);
        if (!(xnext >= -x1) || !std::isfinite(xnext)) {
            shot.low = true;
            return shot;
        }
        shot.half.push_back(xnext);
        if (n < m) {
            if (xnext == 0.0 && k >= 1) {
                zero_hit = true;
                shot.low = true;
                return shot;
            }
            s += weight(xnext);
        }
    }
    shot.residual = shot.half[static_cast<std::size_t>(m) - 1] + shot.half[static_cast<std::size_t>(m)];
    return shot;
}

template <class Next, class Weight>
Shot shoot(double x1, int m, int k, Next& next, Weight& weight) {
    bool zero_hit = false;
    Shot s = shoot_once(x1, m, k, next, weight, zero_hit);
    if (zero_hit) {
        // Exact zero before the median: classify by the neighbouring shot one ulp up.
        bool again = false;
        Shot nudged = shoot_once(std::nextafter(x1, 2.0 * x1 + 1.0), m, k, next, weight, again);
        s.low = nudged.low || nudged.residual < 0.0;
        if (!s.low) {
            s.residual = nudged.residual;
            s.half = std::move(nudged.half);
        }
    }
    return s;
}

inline void validate_size(int k, int n, const RadialOptions& opt) {
    if (k < 0) throw domain_error("radial solve: k must be nonnegative");
    if (n < 2 || n % 2 != 0) throw domain_error("radial solve: N must be even and >= 2");
    if (n > opt.max_points)
        throw domain_error("radial solve: N = " + std::to_string(n) + " exceeds the cap " +
                           std::to_string(opt.max_points));
    if (!(opt.tol > 0.0)) throw domain_error("radial solve: tol must be positive");
    if (opt.max_iterations < 1) throw domain_error("radial solve: max_iterations must be >= 1");
}

inline RadialSolution mirror(int k, const Shot& shot, int m, bool monotone) {
    std::vector<double> pts(static_cast<std::size_t>(2 * m));
    for (int i = 0; i < m; ++i) {
        pts[static_cast<std::size_t>(i)] = shot.half[static_cast<std::size_t>(i)];
        pts[static_cast<std::size_t>(2 * m - 1 - i)] = -shot.half[static_cast<std::size_t>(i)];
    }
    return RadialSolution(k, std::move(pts), std::abs(shot.residual), monotone);
}

// Bisection on the shot value. `expand` allows the bracket to grow when the
// initial ends do not straddle the root.
template <class Next, class Weight>
RadialSolution bisect_shots(int k, int n, double lo, double hi, bool expand, const RadialOptions& opt, Next& next,
                            Weight& weight) {
    const int m = n / 2;
    std::vector<std::pair<double, double>> samples;  // (x1, signed residual) for the monotonicity check
    auto run = [&](double x1) {
        Shot s = shoot(x1, m, k, next, weight);
        samples.emplace_back(x1, s.signed_residual());
        return s;
    };
    auto accept = [&](const Shot& s) {
        // Bisection relies on the sign of the residual switching once. Residual values
        // themselves wobble far below the root (next to divergent shots), so only signs are compared.
        std::sort(samples.begin(), samples.end());
        bool monotone = true;
        bool seen_positive = false;
        for (const auto& sample : samples) {
            if (sample.second > 0.0) seen_positive = true;
            else if (seen_positive) monotone = false;
        }
        return mirror(k, s, m, monotone);
    };

    Shot slo = run(lo);
    if (!slo.low && std::abs(slo.residual) <= opt.tol) return accept(slo);
    Shot shi = run(hi);
    if (!shi.low && std::abs(shi.residual) <= opt.tol) return accept(shi);
    if (expand) {
        for (int i = 0; i < 60 && !(slo.low || slo.residual < 0.0); ++i) slo = run(lo *= 0.5);
        for (int i = 0; i < 30 && (shi.low || shi.residual <= 0.0); ++i) shi = run(hi *= 2.0);
    }
    if (!(slo.low || slo.residual < 0.0) || shi.low || shi.residual <= 0.0)
        throw numerical_error("bracket", "radial solve: initial interval does not bracket the median residual (k=" +
                                             std::to_string(k) + ", N=" + std::to_string(n) + ")");
    for (int it = 0; it < opt.max_iterations; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) {
            // Bracket collapsed to adjacent doubles: take the better usable end.
            if (slo.low || std::abs(shi.residual) <= std::abs(slo.residual)) return accept(shi);
            return accept(slo);
        }
        Shot s = run(mid);
        if (!s.low && std::abs(s.residual) <= opt.tol) return accept(s);
        if (s.low || s.residual < 0.0) {
            lo = mid;
            slo = std::move(s);
        } else {
            hi = mid;
            shi = std::move(s);
        }
    }
    throw numerical_error("iteration-limit", "radial solve: bisection iteration cap reached");
}

}  // namespace detail

/// Zero-median ground state for tilt exponent k with N points.
inline RadialSolution solve_ground_state(int k, int n, const RadialOptions& opt) {
    detail::validate_size(k, n, opt);
    auto next = [k](double x, double s) { return big_b_inverse(big_b(x, k) - 1.0 / s, k); };
    auto weight = [k](double x) { return detail::tilt_weight(x, k); };
    const double lo = std::sqrt(0.5 * (k + 1));
    const double hi = 3.0 * std::sqrt((k + 1) * std::log(static_cast<double>(n))) + 3.0;
    return detail::bisect_shots(k, n, lo, std::max(hi, lo), false, opt, next, weight);
}

inline RadialSolution solve_ground_state(int k, int n, double tol = 1e-12) {
    RadialOptions opt;
    opt.tol = tol;
    return solve_ground_state(k, n, opt);
}

/// Zero-median solution of x_{i+1} = x_i - tau(x_i) / sum_{j<=i} x_j, tau the target's Stein kernel.
/// The upper half comes from the recursion; the lower half is the mirror image.
inline RadialSolution kernel_matched_solve(int k, int n, const RadialOptions& opt) {
    detail::validate_size(k, n, opt);
    if (k == 0) return solve_ground_state(0, n, opt);
    auto next = [k](double x, double s) {
        if (x == 0.0) return -std::numeric_limits<double>::infinity();
        return x - stein_kernel(k, x) / s;
    };
    auto weight = [](double x) { return x; };
    const double lo = 0.25 * std::sqrt(0.5 * (k + 1));
    const double hi = 3.0 * std::sqrt((k + 1) * std::log(static_cast<double>(n))) + 3.0;
    return detail::bisect_shots(k, n, lo, hi, true, opt, next, weight);
}

inline RadialSolution kernel_matched_solve(int k, int n, double tol = 1e-12) {
    RadialOptions opt;
    opt.tol = tol;
    return kernel_matched_solve(k, n, opt);
}

struct PropertyReport {
    double zero_mean_defect = 0.0;   // |sum x_i|
    double variance_defect = 0.0;    // |sum x_i^2 - (k+1)(N-1)| / ((k+1)(N-1))
    double symmetry_defect = 0.0;    // max |x_i + x_{N+1-i}|
    double min_gap = 0.0;            // min (x_i - x_{i+1}); > 0 iff strictly decreasing
    bool zero_mean = false;
    bool variance = false;
    bool symmetric = false;
    bool decreasing = false;
    [[nodiscard]] bool all() const noexcept { return zero_mean && variance && symmetric && decreasing; }
};

inline PropertyReport verify_properties(const RadialSolution& sol) {
    const auto& x = sol.points();
    const std::size_t n = x.size();
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = x[i] * x[i];
    PropertyReport r;
    r.zero_mean_defect = std::abs(pairwise_sum(x));
    const double target = static_cast<double>(sol.k() + 1) * static_cast<double>(n - 1);
    r.variance_defect = n > 1 ? std::abs(pairwise_sum(sq) - target) / target : std::abs(pairwise_sum(sq));
    r.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        r.symmetry_defect = std::max(r.symmetry_defect, std::abs(x[i] + x[n - 1 - i]));
        if (i + 1 < n) r.min_gap = std::min(r.min_gap, x[i] - x[i + 1]);
    }
    r.zero_mean = r.zero_mean_defect <= 1e-9 * static_cast<double>(n);
    r.variance = r.variance_defect <= 1e-8;
    r.symmetric = r.symmetry_defect <= 1e-9;
    r.decreasing = r.min_gap > 0.0;
    return r;
}

}  // namespace miw

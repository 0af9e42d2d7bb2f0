#pragma once

// Special functions and small numerical kernels shared by every module:
// incomplete gamma/beta, erfc/erfcx, safeguarded monotone inversion,
// adaptive Gauss-Kronrod quadrature and pairwise summation.

#include <miw/error.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <string>
#include <vector>

namespace miw {

/// Tolerance policy for integrals and root searches.
struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_refinements = 60;

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_refinements < 1)
            throw domain_error("QuadratureSpec: tolerances must be positive and max_refinements >= 1");
    }
};

/// Pairwise (cascade) summation in ascending index order. Deterministic.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kTiny = 1e-300;

// Series sum S with gamma(a,x) = e^{-x} x^a S.
inline double lower_gamma_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) return sum;
    }
    throw numerical_error("iteration-limit", "incomplete gamma series did not converge");
}

// Continued fraction C with Gamma(a,x) = e^{-x} x^a C (modified Lentz).
inline double upper_gamma_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw numerical_error("iteration-limit", "incomplete gamma continued fraction did not converge");
}

inline void check_gamma_args(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0) || !std::isfinite(a) || std::isnan(x))
        throw domain_error("incomplete gamma: need alpha > 0 and x >= 0");
    if (a > 171.0)
        throw numerical_error("overflow", "incomplete gamma: alpha outside supported range (<= 171)");
}

inline double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw numerical_error("overflow", std::string(what) + ": result overflows");
    return v;
}

}  // namespace detail

/// Regularized lower incomplete gamma P(a, x).
inline double regularized_gamma_p(double a, double x) {
    detail::check_gamma_args(a, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    const double pre = std::exp(a * std::log(x) - x - std::lgamma(a));
    if (x < a + 1.0) return std::min(1.0, pre * detail::lower_gamma_series(a, x));
    return 1.0 - pre * detail::upper_gamma_cf(a, x);
}

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
inline double regularized_gamma_q(double a, double x) {
    detail::check_gamma_args(a, x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    const double pre = std::exp(a * std::log(x) - x - std::lgamma(a));
    if (x < a + 1.0) return std::max(0.0, 1.0 - pre * detail::lower_gamma_series(a, x));
    return pre * detail::upper_gamma_cf(a, x);
}

/// Upper incomplete gamma Gamma(alpha, x).
inline double upper_incomplete_gamma(double alpha, double x) {
    detail::check_gamma_args(alpha, x);
    if (x == 0.0) return detail::checked(std::tgamma(alpha), "upper_incomplete_gamma");
    if (std::isinf(x)) return 0.0;
    if (x < alpha + 1.0) {
        const double lower = std::exp(alpha * std::log(x) - x) * detail::lower_gamma_series(alpha, x);
        return detail::checked(std::tgamma(alpha) - lower, "upper_incomplete_gamma");
    }
    return std::exp(alpha * std::log(x) - x) * detail::upper_gamma_cf(alpha, x);
}

/// e^x Gamma(alpha, x), free of the e^{-x} underflow. This is what the Stein kernel needs.
inline double scaled_upper_gamma(double alpha, double x) {
    detail::check_gamma_args(alpha, x);
    if (x == 0.0) return detail::checked(std::tgamma(alpha), "scaled_upper_gamma");
    if (std::isinf(x)) throw domain_error("scaled_upper_gamma: x must be finite");
    if (x < alpha + 1.0) {
        const double v = std::exp(x) * std::tgamma(alpha) -
                         std::exp(alpha * std::log(x)) * detail::lower_gamma_series(alpha, x);
        return detail::checked(v, "scaled_upper_gamma");
    }
    return detail::checked(std::exp(alpha * std::log(x)) * detail::upper_gamma_cf(alpha, x),
                           "scaled_upper_gamma");
}

namespace detail {

// Continued fraction for the incomplete beta (Lentz).
inline double beta_cf(double x, double a, double b) {
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m < 10000; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw numerical_error("iteration-limit", "incomplete beta continued fraction did not converge");
}

}  // namespace detail

/// Regularized incomplete beta I(x; a, b).
inline double regularized_incomplete_beta(double x, double a, double b) {
    if (!(x >= 0.0 && x <= 1.0) || !(a > 0.0) || !(b > 0.0))
        throw domain_error("regularized_incomplete_beta: need 0 <= x <= 1, a > 0, b > 0");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                  a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_cf(x, a, b) / a;
    return 1.0 - front * detail::beta_cf(1.0 - x, b, a) / b;
}

/// Complementary error function.
inline double erfc(double x) { return std::erfc(x); }

/// Scaled complementary error function e^{x^2} erfc(x).
inline double erfcx(double x) {
    if (x < 10.0) return std::exp(x * x) * std::erfc(x);
    // Laplace continued fraction: sqrt(pi) erfcx(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))).
    double t = 0.0;
    for (int n = 60; n >= 1; --n) t = (0.5 * n) / (x + t);
    return 1.0 / ((x + t) * std::sqrt(std::numbers::pi));
}

/// Safeguarded bisection for f(x) = target on [lo, hi], f monotone (either direction).
template <class F>
double invert_monotone(F&& f, double target, double lo, double hi, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (!(lo <= hi)) throw domain_error("invert_monotone: need lo <= hi");
    double flo = f(lo), fhi = f(hi);
    if (std::abs(flo - target) <= spec.abs_tol) return lo;
    if (std::abs(fhi - target) <= spec.abs_tol) return hi;
    const bool increasing = flo < fhi;
    if (!(increasing ? (flo <= target && target <= fhi) : (fhi <= target && target <= flo)))
        throw numerical_error("bracket", "invert_monotone: target not enclosed by [f(lo), f(hi)]");
    const int cap = 4 * spec.max_refinements;
    for (int it = 0; it < cap; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) return std::abs(flo - target) <= std::abs(fhi - target) ? lo : hi;
        const double fm = f(mid);
        if (std::abs(fm - target) <= spec.abs_tol) return mid;
        if ((fm < target) == increasing) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    throw numerical_error("iteration-limit", "invert_monotone: iteration limit reached");
}

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
QuadResult gauss_kronrod15(F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * kWgk[7];
    double g = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double s = f(c - dx) + f(c + dx);
        k += kWgk[j] * s;
        if (j % 2 == 1) g += kWg[j / 2] * s;
    }
    return {k * h, std::abs((k - g) * h)};
}

struct Piece {
    double a, b;
    QuadResult r;
    bool operator<(const Piece& o) const { return r.error < o.r.error; }
};

template <class F>
QuadResult adaptive_finite(F& f, double a, double b, const QuadratureSpec& spec) {
    if (a == b) return {};
    std::priority_queue<Piece> heap;
    Piece first{a, b, gauss_kronrod15(f, a, b)};
    double total = first.r.value, err = first.r.error;
    heap.push(first);
    const int budget = 100 * spec.max_refinements;
    for (int it = 0; it < budget; ++it) {
        if (err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) break;
        Piece worst = heap.top();
        const double mid = worst.a + 0.5 * (worst.b - worst.a);
        if (mid <= worst.a || mid >= worst.b) break;  // cannot refine further
        heap.pop();
        Piece left{worst.a, mid, gauss_kronrod15(f, worst.a, mid)};
        Piece right{mid, worst.b, gauss_kronrod15(f, mid, worst.b)};
        total += left.r.value + right.r.value - worst.r.value;
        err += left.r.error + right.r.error - worst.r.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum in interval order so the result does not depend on heap arithmetic drift.
    std::vector<Piece> pieces;
    pieces.reserve(heap.size());
    while (!heap.empty()) {
        pieces.push_back(heap.top());
        heap.pop();
    }
    std::sort(pieces.begin(), pieces.end(), [](const Piece& l, const Piece& r) { return l.a < r.a; });
    std::vector<double> vals, errs;
    for (const auto& p : pieces) {
        vals.push_back(p.r.value);
        errs.push_back(p.r.error);
    }
    QuadResult out{pairwise_sum(vals), pairwise_sum(errs)};
    if (!std::isfinite(out.value)) throw numerical_error("quadrature", "integrand produced a non-finite value");
    if (out.error > 1e3 * std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value)))
        throw numerical_error("quadrature", "adaptive quadrature failed to reach tolerance");
    return out;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integral of f over [a, b]; either end may be infinite.
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (std::isnan(a) || std::isnan(b)) throw domain_error("integrate: NaN limit");
    if (a > b) {
        auto r = integrate(f, b, a, spec);
        return {-r.value, r.error};
    }
    if (a == b) return {};
    const bool lo_inf = std::isinf(a), hi_inf = std::isinf(b);
    if (lo_inf && hi_inf) {
        auto l = integrate(f, -std::numeric_limits<double>::infinity(), 0.0, spec);
        auto r = integrate(f, 0.0, std::numeric_limits<double>::infinity(), spec);
        return {l.value + r.value, l.error + r.error};
    }
    if (hi_inf) {
        auto g = [&](double t) {
            const double u = 1.0 - t;
            return f(a + t / u) / (u * u);
        };
        return detail::adaptive_finite(g, 0.0, 1.0, spec);
    }
    if (lo_inf) {
        auto g = [&](double t) {
            const double u = 1.0 - t;
            return f(b - t / u) / (u * u);
        };
        return detail::adaptive_finite(g, 0.0, 1.0, spec);
    }
    auto g = [&](double x) { return f(x); };
    return detail::adaptive_finite(g, a, b, spec);
}

/// Integral over [a, b] split at the given interior breakpoints (values outside are ignored).
template <class F>
QuadResult integrate_with_breaks(F&& f, double a, double b, std::vector<double> breaks,
                                 const QuadratureSpec& spec = {}) {
    std::vector<double> cuts{a};
    std::sort(breaks.begin(), breaks.end());
    for (double c : breaks)
        if (c > cuts.back() && c < b) cuts.push_back(c);
    cuts.push_back(b);
    QuadResult out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto r = integrate(f, cuts[i], cuts[i + 1], spec);
        out.value += r.value;
        out.error += r.error;
    }
    return out;
}

}  // namespace miw

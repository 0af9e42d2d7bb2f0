#pragma once

// Exact Wasserstein-1 distances on the line, W1 = integral of |F_N - F|, and the
// spherical-coordinate combination bound.

#include <miw/error.hpp>
#include <miw/specfn.hpp>
#include <miw/target.hpp>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace miw {

template <class L>
concept CdfLaw = requires(const L& law, double x) {
    { law.cdf(x) } -> std::convertible_to<double>;
};

/// A law whose cdf has closed-form integrals over half-lines.
template <class L>
concept IntegrableCdfLaw = CdfLaw<L> && requires(const L& law, double x) {
    { law.lower_cdf_integral(x) } -> std::convertible_to<double>;
    { law.upper_survival_integral(x) } -> std::convertible_to<double>;
};

/// Uniform law on [lo, hi].
struct UniformLaw {
    double lo = 0.0;
    double hi = 1.0;

    [[nodiscard]] double cdf(double x) const {
        if (x <= lo) return 0.0;
        if (x >= hi) return 1.0;
        return (x - lo) / (hi - lo);
    }
    [[nodiscard]] double lower_cdf_integral(double x) const {
        if (x <= lo) return 0.0;
        if (x >= hi) return 0.5 * (hi - lo) + (x - hi);
        return 0.5 * (x - lo) * (x - lo) / (hi - lo);
    }
    [[nodiscard]] double upper_survival_integral(double x) const {
        if (x >= hi) return 0.0;
        if (x <= lo) return 0.5 * (hi - lo) + (lo - x);
        return 0.5 * (hi - x) * (hi - x) / (hi - lo);
    }
};

/// A law given only by its cdf, supported in [lo, hi] (either end may be infinite).
struct FunctionLaw {
    std::function<double(double)> cdf_fn;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    [[nodiscard]] double cdf(double x) const {
        if (x <= lo) return 0.0;
        if (x >= hi) return 1.0;
        return cdf_fn(x);
    }
};

struct W1Result {
    double distance = 0.0;
    double error_bound = 0.0;
};

namespace detail {

inline constexpr double kTailThreshold = 1e-14;

// Integral of F over [a, b] for integrable laws, taking the better-conditioned form.
template <IntegrableCdfLaw L>
double cdf_integral(const L& law, double a, double b) {
    if (law.cdf(0.5 * (a + b)) <= 0.5) return law.lower_cdf_integral(b) - law.lower_cdf_integral(a);
    return (b - a) - (law.upper_survival_integral(a) - law.upper_survival_integral(b));
}

// Integral of |c - F| over [a, b] where c - F has one sign.
template <CdfLaw L>
double one_sided(const L& law, double c, double a, double b, bool above, const QuadratureSpec& spec, double& err) {
    if (b <= a) return 0.0;
    if constexpr (IntegrableCdfLaw<L>) {
        const double v = cdf_integral(law, a, b) - c * (b - a);
        err += 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(v) + (b - a) + std::abs(a) + std::abs(b));
        return std::max(0.0, above ? v : -v);
    } else {
        auto r = integrate([&](double x) { return std::abs(law.cdf(x) - c); }, a, b, spec);
        err += r.error;
        return r.value;
    }
}

// Finds where F(x) leaves (0, 1) up to the tail threshold, for quadrature-only laws.
template <CdfLaw L>
double tail_point(const L& law, double start, bool left) {
    double step = 1.0;
    double x = start;
    for (int i = 0; i < 200; ++i) {
        x = left ? start - step : start + step;
        const double f = law.cdf(x);
        if (left ? f < kTailThreshold : 1.0 - f < kTailThreshold) return x;
        step *= 2.0;
    }
    throw numerical_error("tail", "w1: cdf does not reach its tail threshold");
}

}  // namespace detail

/// W1 between the empirical law of `points` and the law with cdf `law.cdf`.
template <CdfLaw L>
W1Result w1_empirical_vs_cdf(std::span<const double> points, const L& law, const QuadratureSpec& spec = {}) {
    if (points.empty()) throw domain_error("w1_empirical_vs_cdf: empty point set");
    QuadratureSpec seg = spec;
    seg.abs_tol = std::min(spec.abs_tol, 1e-11);
    std::vector<double> y(points.begin(), points.end());
    for (double v : y)
        if (!std::isfinite(v)) throw domain_error("w1_empirical_vs_cdf: non-finite point");
    std::sort(y.begin(), y.end());
    const std::size_t n = y.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    double err = 0.0;
    std::vector<double> pieces;
    pieces.reserve(n + 1);

    // Tails: F_N = 0 below y_1 and 1 above y_N.
    if constexpr (IntegrableCdfLaw<L>) {
        pieces.push_back(law.lower_cdf_integral(y.front()));
    } else {
        const double a = detail::tail_point(law, y.front(), true);
        auto r = integrate([&](double x) { return law.cdf(x); }, a, y.front(), seg);
        pieces.push_back(r.value);
        err += r.error + detail::kTailThreshold * (1.0 + std::abs(a));
    }

    double prev_f = law.cdf(y.front());
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double a = y[j], b = y[j + 1];
        if (b == a) continue;
        const double c = static_cast<double>(j + 1) * inv_n;
        const double fa = prev_f, fb = law.cdf(b);
        if (fb + 1e-15 < fa) throw domain_error("w1_empirical_vs_cdf: cdf is not monotone");
        prev_f = fb;
        double v = 0.0;
        if (fa >= c) {
            v = detail::one_sided(law, c, a, b, true, seg, err);
        } else if (fb <= c) {
            v = detail::one_sided(law, c, a, b, false, seg, err);
        } else {
            const double cross = invert_monotone([&](double x) { return law.cdf(x); }, c, a, b, seg);
            v = detail::one_sided(law, c, a, cross, false, seg, err) +
                detail::one_sided(law, c, cross, b, true, seg, err);
        }
        pieces.push_back(v);
    }

    if constexpr (IntegrableCdfLaw<L>) {
        pieces.push_back(law.upper_survival_integral(y.back()));
    } else {
        const double b = detail::tail_point(law, y.back(), false);
        auto r = integrate([&](double x) { return 1.0 - law.cdf(x); }, y.back(), b, seg);
        pieces.push_back(r.value);
        err += r.error + detail::kTailThreshold * (1.0 + std::abs(b));
    }
    return {pairwise_sum(pieces), err};
}

/// W1 on the line between the empirical law of `angles` and uniform(0, period).
inline W1Result w1_empirical_vs_uniform_angles(std::span<const double> angles, double period) {
    if (!(period > 0.0)) throw domain_error("w1_empirical_vs_uniform_angles: period must be positive");
    for (double a : angles)
        if (!(a >= 0.0 && a < period)) throw domain_error("w1_empirical_vs_uniform_angles: angle out of [0, period)");
    return w1_empirical_vs_cdf(angles, UniformLaw{0.0, period});
}

/// Exact W1 between two equal-size empirical laws: mean |sorted difference|.
inline double w1_empirical_pair(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) throw domain_error("w1_empirical_pair: need equal nonempty sizes");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = std::abs(x[i] - y[i]);
    return pairwise_sum(d) / static_cast<double>(x.size());
}

struct MarginalDistances {
    double radial = 0.0;
    std::vector<double> polar;
    std::optional<double> azimuthal;
    double m_mu = 0.0;
    double m_nu = 0.0;
};

/// radial + sqrt(m_mu m_nu) (sum of polar + azimuthal).
inline double spherical_combine(const MarginalDistances& md, int d) {
    if (d < 2) throw domain_error("spherical_combine: d must be >= 2");
    if (d == 2 && (md.polar.size() != 1 || md.azimuthal))
        throw domain_error("spherical_combine: d = 2 takes one angle and no azimuth");
    if (d >= 3 && (md.polar.size() != static_cast<std::size_t>(d - 2) || !md.azimuthal))
        throw domain_error("spherical_combine: d >= 3 takes d-2 polar angles and an azimuth");
    auto nonneg = [](double v) { return v >= 0.0 && std::isfinite(v); };
    bool ok = nonneg(md.radial) && nonneg(md.m_mu) && nonneg(md.m_nu) && (!md.azimuthal || nonneg(*md.azimuthal));
    for (double p : md.polar) ok = ok && nonneg(p);
    if (!ok) throw domain_error("spherical_combine: entries must be finite and nonnegative");
    double angular = md.azimuthal.value_or(0.0);
    for (double p : md.polar) angular += p;
    return md.radial + std::sqrt(md.m_mu * md.m_nu) * angular;
}

inline double mean_abs_deviation(std::span<const double> points) {
    if (points.empty()) throw domain_error("mean_abs_deviation: empty point set");
    std::vector<double> a(points.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(points[i]);
    return pairwise_sum(a) / static_cast<double>(a.size());
}

inline double mean_abs_deviation(const TiltedGaussianTarget& t) { return t.mean_abs(); }

}  // namespace miw

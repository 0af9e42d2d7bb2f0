#pragma once

// The tilted Gaussian law p(x) = c_k |x|^k phi(x), its Stein kernel and the
// functions R, Psi1, Psi2 that enter the Stein-kernel Wasserstein bound.

#include <miw/error.hpp>
#include <miw/specfn.hpp>

#include <cmath>
#include <numbers>

namespace miw {

class TiltedGaussianTarget {
public:
    explicit TiltedGaussianTarget(int k, QuadratureSpec quadrature = {}) : k_(k), quadrature_(quadrature) {
        if (k < 0) throw domain_error("TiltedGaussianTarget: k must be nonnegative");
        if (k > 300) throw domain_error("TiltedGaussianTarget: k outside supported range (<= 300)");
        quadrature_.validate();
        shape_ = 0.5 * (k + 1);
        log_gamma_shape_ = std::lgamma(shape_);
        normalizer_ = std::exp(0.5 * std::log(std::numbers::pi) - 0.5 * k * std::numbers::ln2 - log_gamma_shape_);
        moment_scale_ = std::exp(-log_gamma_shape_) / std::numbers::sqrt2;
    }

    [[nodiscard]] int k() const noexcept { return k_; }
    /// c_k = sqrt(pi) / (2^{k/2} Gamma((k+1)/2)).
    [[nodiscard]] double normalizer() const noexcept { return normalizer_; }
    [[nodiscard]] const QuadratureSpec& quadrature() const noexcept { return quadrature_; }

    [[nodiscard]] double density(double x) const {
        const double ax = std::abs(x);
        return normalizer_ * std::pow(ax, k_) * std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    }

    [[nodiscard]] double cdf(double x) const {
        if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
        const double tail = 0.5 * regularized_gamma_q(shape_, 0.5 * x * x);
        return x < 0 ? tail : 1.0 - tail;
    }

    [[nodiscard]] double survival(double x) const { return cdf(-x); }

    /// Integral of u p(u) over (-inf, x].
    [[nodiscard]] double partial_first_moment(double x) const {
        return -moment_scale_ * upper_incomplete_gamma(0.5 * k_ + 1.0, 0.5 * x * x);
    }

    /// Integral of the cdf over (-inf, x].
    [[nodiscard]] double lower_cdf_integral(double x) const {
        if (std::isinf(x)) {
            if (x < 0) return 0.0;
            throw domain_error("lower_cdf_integral: diverges at +inf");
        }
        const double ax = std::abs(x);
        const double left = std::exp(-0.5 * x * x) * scaled_tail(ax);
        return x <= 0 ? left : ax + left;
    }

    /// Integral of the survival function over [x, inf).
    [[nodiscard]] double upper_survival_integral(double x) const { return lower_cdf_integral(-x); }

    /// E|X| = sqrt(2) Gamma(k/2 + 1) / Gamma((k+1)/2).
    [[nodiscard]] double mean_abs() const {
        return std::numbers::sqrt2 * std::exp(std::lgamma(0.5 * k_ + 1.0) - log_gamma_shape_);
    }

    /// R(x) = (integral of P below x)(integral of 1-P above x) / p(x), computed with the
    /// Gaussian factors cancelled analytically.
    [[nodiscard]] double r_infinity(double x) const {
        const double ax = std::abs(x);
        if (ax == 0.0 && k_ >= 1) throw domain_error("r_infinity: density vanishes at x = 0 for k >= 1");
        const double t = scaled_tail(ax);
        const double inner = ax + std::exp(-0.5 * x * x) * t;
        return inner * t * std::sqrt(2.0 * std::numbers::pi) / (normalizer_ * std::pow(ax, k_));
    }

private:
    // e^{x^2/2} times the integral of P over (-inf, -x], x >= 0.
    [[nodiscard]] double scaled_tail(double x) const {
        const double s = 0.5 * x * x;
        const double first = moment_scale_ * scaled_upper_gamma(0.5 * k_ + 1.0, s);
        const double second = x * scaled_upper_gamma(shape_, s) * std::exp(-log_gamma_shape_) * 0.5;
        return first - second;
    }

    int k_;
    QuadratureSpec quadrature_;
    double shape_ = 0.5;
    double log_gamma_shape_ = 0.0;
    double normalizer_ = 1.0;
    double moment_scale_ = 0.0;
};

inline double density(const TiltedGaussianTarget& t, double x) { return t.density(x); }
inline double cdf(const TiltedGaussianTarget& t, double x) { return t.cdf(x); }
inline double r_infinity(const TiltedGaussianTarget& t, double x) { return t.r_infinity(x); }

/// Stein kernel through the incomplete gamma: 2^{k/2} |x|^{-k} e^{x^2/2} Gamma(1 + k/2, x^2/2).
inline double stein_kernel_gamma(int k, double x) {
    if (k < 0) throw domain_error("stein_kernel: k must be nonnegative");
    const double ax = std::abs(x);
    if (k == 0) return 1.0;
    if (ax == 0.0) throw domain_error("stein_kernel: diverges at x = 0 for k >= 1");
    const double s = 0.5 * x * x;
    return std::exp(0.5 * k * std::numbers::ln2 - k * std::log(ax)) * scaled_upper_gamma(1.0 + 0.5 * k, s);
}

/// Stein kernel of the tilted Gaussian, with closed forms for k <= 2.
inline double stein_kernel(int k, double x) {
    if (k < 0) throw domain_error("stein_kernel: k must be nonnegative");
    if (k == 0) return 1.0;
    const double ax = std::abs(x);
    if (ax == 0.0) throw domain_error("stein_kernel: diverges at x = 0 for k >= 1");
    if (k == 1) return 1.0 + std::sqrt(0.5 * std::numbers::pi) / ax * erfcx(ax / std::numbers::sqrt2);
    if (k == 2) return 1.0 + 2.0 / (x * x);
    return stein_kernel_gamma(k, x);
}

inline double stein_kernel(const TiltedGaussianTarget& t, double x) { return stein_kernel(t.k(), x); }

/// Psi1 = 2R / tau^2, with its limit at the origin.
inline double psi1(const TiltedGaussianTarget& t, double x) {
    if (x == 0.0) return t.k() == 0 ? std::sqrt(2.0 / std::numbers::pi) : 0.0;
    const double tau = stein_kernel(t, x);
    return 2.0 * t.r_infinity(x) / (tau * tau);
}

/// Psi2 = (1/tau)(1 + |2x/tau - x + k/x| R / tau), with its limit at the origin.
inline double psi2(const TiltedGaussianTarget& t, double x) {
    if (x == 0.0) {
        if (t.k() == 0) return 1.0;
        return t.k() == 1 ? 0.5 : 0.0;
    }
    const double tau = stein_kernel(t, x);
    const double drift = 2.0 * x / tau - x + t.k() / x;
    return (1.0 + std::abs(drift) * t.r_infinity(x) / tau) / tau;
}

}  // namespace miw

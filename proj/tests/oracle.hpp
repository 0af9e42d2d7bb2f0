#pragma once

// Independent reference computations used only by the tests. Nothing here calls
// into the library's numerics.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// Composite Simpson rule with n (even) panels, in long double.
inline long double simpson(const std::function<long double(long double)>& f, long double a, long double b,
                           int n = 200000) {
    if (n % 2) ++n;
    const long double h = (b - a) / n;
    long double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0L : 2.0L);
    return s * h / 3.0L;
}

/// erf by its Maclaurin series (fine for |x| <= 3).
inline long double erf_series(long double x) {
    long double term = x, sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x * x / n;
        sum += term / (2 * n + 1);
    }
    return 2.0L / std::sqrt(std::numbers::pi_v<long double>) * sum;
}

/// Gamma(a, x) = integral_x^inf t^{a-1} e^{-t} dt by Simpson on a truncated range.
inline long double upper_gamma_quad(long double a, long double x) {
    const long double top = x + 80.0L;
    return simpson([a](long double t) { return t <= 0 ? 0.0L : std::pow(t, a - 1) * std::exp(-t); }, x, top, 400000);
}

/// Tilted Gaussian density c_k |x|^k phi(x), normalizing constant by quadrature.
inline long double tilted_density_unnormalized(int k, long double x) {
    return std::pow(std::fabs(x), k) * std::exp(-0.5L * x * x);
}

inline long double tilted_norm(int k) {
    return 2.0L * simpson([k](long double x) { return tilted_density_unnormalized(k, x); }, 0.0L, 40.0L, 400000);
}

/// Ground-state recursion re-solved in long double by plain bisection on x_1.
inline std::vector<long double> resolve_ground_state(int k, int n) {
    const int m = n / 2;
    auto bb = [k](long double x) { return std::copysign(std::pow(std::fabs(x), k + 1) / (k + 1), x); };
    auto binv = [k](long double y) { return std::copysign(std::pow((k + 1) * std::fabs(y), 1.0L / (k + 1)), y); };
    // +1: x_1 too large (residual > 0); -1: too small or blew up.
    auto shoot = [&](long double x1, std::vector<long double>& out) {
        out.assign(1, x1);
        long double s = 0;
        for (int i = 1; i <= m; ++i) {
            const long double xn = out.back();
            if (k >= 1 && xn == 0) return -1;
            s += (k == 0 ? xn : std::copysign(std::pow(std::fabs(xn), 1 - k), xn));
            if (!(s > 0)) return -1;
            const long double nx = binv(bb(xn) - 1.0L / s);
            if (!(nx >= -x1)) return -1;
            out.push_back(nx);
        }
        return out[m - 1] + out[m] > 0 ? 1 : -1;
    };
    long double lo = std::sqrt((k + 1) / 2.0L), hi = 3.0L * std::sqrt((k + 1) * std::log((long double)n)) + 3.0L;
    std::vector<long double> pts;
    for (int it = 0; it < 200; ++it) {
        const long double mid = 0.5L * (lo + hi);
        if (mid == lo || mid == hi) break;
        (shoot(mid, pts) > 0 ? hi : lo) = mid;
    }
    shoot(hi, pts);
    std::vector<long double> full(n);
    for (int i = 0; i < m; ++i) {
        full[i] = pts[i];
        full[n - 1 - i] = -pts[i];
    }
    return full;
}

/// Brute-force integral of |F_N - F| by the trapezoid rule on about `grid` nodes spread over
/// [lo, hi], with the jumps of F_N placed on segment boundaries.
inline double trapezoid_w1(std::vector<double> pts, const std::function<double(double)>& cdf, double lo, double hi,
                           long grid) {
    std::sort(pts.begin(), pts.end());
    std::vector<double> cuts{lo};
    for (double p : pts) cuts.push_back(p);
    cuts.push_back(hi);
    const double n = static_cast<double>(pts.size());
    long double sum = 0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double a = cuts[s], b = cuts[s + 1];
        if (b <= a) continue;
        const double level = s / n;  // F_N on (a, b)
        const long nodes = std::max(2L, static_cast<long>(grid * (b - a) / (hi - lo)));
        const double h = (b - a) / nodes;
        long double part = 0.5L * (std::fabs(level - cdf(a)) + std::fabs(level - cdf(b)));
        for (long i = 1; i < nodes; ++i) part += std::fabs(level - cdf(a + h * i));
        sum += part * h;
    }
    return static_cast<double>(sum);
}

}  // namespace oracle

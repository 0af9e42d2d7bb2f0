#pragma once

// Log-log rate fits with optional logarithmic corrections.

#include <miw/error.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace miw {

enum class Correction { none, sqrt_log, log_pow6 };

/// c(N) divided out of the values before fitting.
inline double correction_factor(Correction c, double n) {
    switch (c) {
        case Correction::none: return 1.0;
        case Correction::sqrt_log: return std::sqrt(std::log(n));
        case Correction::log_pow6: return std::pow(std::log(n), 6);
    }
    return 1.0;
}

inline std::string_view correction_name(Correction c) {
    switch (c) {
        case Correction::none: return "none";
        case Correction::sqrt_log: return "sqrt-log";
        case Correction::log_pow6: return "log6";
    }
    return "none";
}

inline std::optional<Correction> parse_correction(std::string_view s) {
    if (s == "none") return Correction::none;
    if (s == "sqrt-log" || s == "sqrt_log") return Correction::sqrt_log;
    if (s == "log6" || s == "log_pow6") return Correction::log_pow6;
    return std::nullopt;
}

struct RateFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<int> n_grid;
    std::vector<double> values;
    Correction correction = Correction::none;
};

/// Ordinary least squares of log(value / c(N)) on log N.
inline RateFit fit_rate(const std::vector<std::pair<int, double>>& pairs, Correction correction = Correction::none) {
    if (pairs.size() < 3) throw domain_error("fit_rate: need at least three points");
    RateFit fit;
    fit.correction = correction;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [n, v] = pairs[i];
        if (n < 2) throw domain_error("fit_rate: N must be >= 2");
        if (i > 0 && n <= pairs[i - 1].first) throw domain_error("fit_rate: N grid must be strictly increasing");
        if (!(v > 0.0) || !std::isfinite(v)) throw domain_error("fit_rate: values must be positive and finite");
        fit.n_grid.push_back(n);
        fit.values.push_back(v);
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(std::log(v / correction_factor(correction, n)));
    }
    const double m = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw domain_error("fit_rate: degenerate N grid");
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (fit.intercept + fit.exponent * lx[i]);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

/// Parses "start:stop:step" (inclusive stop).
inline std::vector<int> parse_n_grid(std::string_view spec) {
    std::vector<long> parts;
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t colon = spec.find(':', pos);
        const std::string_view tok = spec.substr(pos, colon == std::string_view::npos ? spec.npos : colon - pos);
        if (tok.empty()) throw domain_error("n-grid: expected start:stop:step");
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(std::string(tok), &used);
        } catch (const std::exception&) {
            throw domain_error("n-grid: non-integer field '" + std::string(tok) + "'");
        }
        if (used != tok.size()) throw domain_error("n-grid: non-integer field '" + std::string(tok) + "'");
        parts.push_back(v);
        if (colon == std::string_view::npos) {
            if (i != 2) throw domain_error("n-grid: expected start:stop:step");
            pos = spec.size();
        } else {
            pos = colon + 1;
        }
    }
    if (pos != spec.size()) throw domain_error("n-grid: trailing characters");
    const long start = parts[0], stop = parts[1], step = parts[2];
    if (step <= 0 || start < 1 || stop < start) throw domain_error("n-grid: need 1 <= start <= stop and step > 0");
    std::vector<int> out;
    for (long n = start; n <= stop; n += step) out.push_back(static_cast<int>(n));
    return out;
}

}  // namespace miw

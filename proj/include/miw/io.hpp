#pragma once

// CSV and JSON serialization. Doubles are written with 17 significant digits in CSV;
// JSON uses the shortest decimal that round-trips, which is bit-exact.

#include <miw/config.hpp>
#include <miw/radial.hpp>
#include <miw/rates.hpp>
#include <miw/stein.hpp>

#include <json.hpp>

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace miw {

using json = nlohmann::json;

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// '#'-prefixed comment line (newline added).
inline std::string csv_comment(const std::string& text) { return "# " + text + "\n"; }

// ---- radial ------------------------------------------------------------------

inline std::string radial_to_csv(const RadialSolution& sol, const std::string& provenance = {}) {
    std::ostringstream os;
    if (!provenance.empty()) os << csv_comment(provenance);
    os << csv_comment("k=" + std::to_string(sol.k())) << csv_comment("N=" + std::to_string(sol.n_points()));
    os << "x\n";
    for (double x : sol.points()) os << format_double(x) << '\n';
    return os.str();
}

inline json radial_to_json(const RadialSolution& sol) {
    return json{{"k", sol.k()}, {"N", sol.n_points()}, {"residual", sol.residual()}, {"points", sol.points()}};
}

inline RadialSolution radial_from_json(const json& j) {
    auto pts = j.at("points").get<std::vector<double>>();
    if (static_cast<int>(pts.size()) != j.at("N").get<int>()) throw domain_error("radial JSON: N does not match points");
    return RadialSolution(j.at("k").get<int>(), std::move(pts), j.value("residual", 0.0));
}

// ---- bound -------------------------------------------------------------------

inline std::string bound_csv_header(bool with_coupling) {
    std::string h = "k,N,term_kernel_mismatch,term_gap,total_bound,exact_w1,dominates";
    if (with_coupling) h += ",coupling_bound,inverse_moment_l1";
    return h + "\n";
}

inline std::string bound_csv_row(const BoundReport& r, bool with_coupling) {
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    std::string row = std::to_string(r.k) + "," + std::to_string(r.n_points) + "," +
                      format_double(r.term_kernel_mismatch) + "," + format_double(r.term_gap) + "," +
                      format_double(r.total_bound) + "," + opt(r.exact_w1) + "," +
                      (r.exact_w1 ? (r.dominates() ? "true" : "false") : "");
    if (with_coupling) row += "," + opt(r.coupling_bound) + "," + opt(r.inverse_moment_l1);
    return row + "\n";
}

inline json bound_to_json(const BoundReport& r) {
    json j{{"k", r.k},
           {"N", r.n_points},
           {"term_kernel_mismatch", r.term_kernel_mismatch},
           {"term_gap", r.term_gap},
           {"total_bound", r.total_bound}};
    if (r.exact_w1) {
        j["exact_w1"] = *r.exact_w1;
        j["dominates"] = r.dominates();
    }
    if (r.coupling_bound) j["coupling_bound"] = *r.coupling_bound;
    if (r.inverse_moment_l1) j["inverse_moment_l1"] = *r.inverse_moment_l1;
    return j;
}

// ---- configuration -----------------------------------------------------------

inline json plan_to_json(const CountPlan& p) {
    return json{{"d", p.d},
                {"N", p.n_total},
                {"M", p.m_shells},
                {"K", p.k_per_shell},
                {"counts", p.n_per_direction}};
}

inline std::string config_to_csv(const MiwConfiguration& cfg, const std::string& provenance = {}) {
    std::ostringstream os;
    if (!provenance.empty()) os << csv_comment(provenance);
    const auto& p = cfg.plan();
    std::string ks;
    for (std::size_t j = 0; j < p.k_per_shell.size(); ++j) ks += (j ? ";" : "") + std::to_string(p.k_per_shell[j]);
    os << csv_comment("d=" + std::to_string(p.d) + " N=" + std::to_string(p.n_total) +
                      " M=" + std::to_string(p.m_shells) + " K=" + ks + " radial_k=" + std::to_string(cfg.radial_k()));
    os << "shell_index,direction_index,point_index,polar_angles,azimuth,signed_radius";
    for (int c = 1; c <= p.d; ++c) os << ",x" << c;
    os << '\n';
    const auto xyz = cartesian_points(cfg);
    std::size_t row = 0;
    for (const auto& dir : cfg.directions()) {
        std::string polar;
        for (std::size_t l = 0; l < dir.polar.size(); ++l) polar += (l ? ";" : "") + format_double(dir.polar[l]);
        const std::string az = dir.azimuth ? format_double(*dir.azimuth) : std::string();
        const auto& pts = dir.radial->points();
        for (std::size_t n = 0; n < pts.size(); ++n, ++row) {
            os << dir.shell << ',' << dir.index << ',' << n << ',' << polar << ',' << az << ','
               << format_double(pts[n]);
            for (double c : xyz[row]) os << ',' << format_double(c);
            os << '\n';
        }
    }
    return os.str();
}

inline json config_to_json(const MiwConfiguration& cfg) {
    json dirs = json::array();
    for (const auto& dir : cfg.directions()) {
        json d{{"shell", dir.shell}, {"index", dir.index}, {"polar", dir.polar}, {"radii", dir.radial->points()}};
        if (dir.azimuth) d["azimuth"] = *dir.azimuth;
        dirs.push_back(std::move(d));
    }
    return json{{"plan", plan_to_json(cfg.plan())},
                {"radial_k", cfg.radial_k()},
                {"state_label", cfg.state_label()},
                {"directions", std::move(dirs)}};
}

// ---- rates -------------------------------------------------------------------

inline json rate_fit_to_json(const RateFit& f) {
    return json{{"exponent", f.exponent},
                {"intercept", f.intercept},
                {"r_squared", f.r_squared},
                {"correction", std::string(correction_name(f.correction))},
                {"n_grid", f.n_grid},
                {"values", f.values}};
}

}  // namespace miw

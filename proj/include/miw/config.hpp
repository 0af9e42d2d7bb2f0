#pragma once

// d-dimensional configurations in signed (hyper)spherical coordinates: count
// plans, angle grids, radial sequences, the interworld potential and the Hamiltonian.

#include <miw/error.hpp>
#include <miw/radial.hpp>
#include <miw/specfn.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace miw {

/// How many points go where.
///
/// d = 2: a single ring of M directions; `m_shells` = M, `k_per_shell` = {M} and
/// `n_per_direction` holds one row {N_1, ..., N_M}.
/// d >= 3: `m_shells` = M shells, shell j has K_j directions and row j of
/// `n_per_direction` holds N_j1, ..., N_jK_j.
struct CountPlan {
    int d = 2;
    int n_total = 0;
    int m_shells = 0;
    std::vector<int> k_per_shell;
    std::vector<std::vector<int>> n_per_direction;

    [[nodiscard]] int shell_total(std::size_t j) const {
        int s = 0;
        for (int c : n_per_direction.at(j)) s += c;
        return s;
    }
    [[nodiscard]] int direction_count() const {
        int s = 0;
        for (const auto& row : n_per_direction) s += static_cast<int>(row.size());
        return s;
    }
    bool operator==(const CountPlan&) const = default;
};

inline void validate_plan(const CountPlan& p) {
    if (p.d < 2) throw domain_error("CountPlan: d must be >= 2");
    if (p.n_per_direction.size() != p.k_per_shell.size())
        throw domain_error("CountPlan: one row of counts per shell required");
    if (p.d == 2 && (p.k_per_shell.size() != 1 || p.k_per_shell[0] != p.m_shells))
        throw domain_error("CountPlan: d = 2 plans hold a single ring of M directions");
    if (p.d >= 3 && p.k_per_shell.size() != static_cast<std::size_t>(p.m_shells))
        throw domain_error("CountPlan: shell count mismatch");
    long total = 0;
    for (std::size_t j = 0; j < p.n_per_direction.size(); ++j) {
        if (p.n_per_direction[j].size() != static_cast<std::size_t>(p.k_per_shell[j]) || p.k_per_shell[j] < 1)
            throw domain_error("CountPlan: direction count mismatch in shell " + std::to_string(j));
        for (int c : p.n_per_direction[j]) {
            if (c < 2) throw domain_error("CountPlan: every direction needs at least two points");
            total += c;
        }
    }
    if (total != p.n_total) throw domain_error("CountPlan: counts do not sum to N");
}

/// |a - b| reduced modulo L to the shorter arc.
inline double circular_abs(double a, double b, double period) {
    if (!(period > 0.0)) throw domain_error("circular_abs: period must be positive");
    const double r = std::fmod(std::abs(a - b), period);
    return std::min(r, period - r);
}

/// L(x) = max(1, x/2).
inline double penalty_l(double x) {
    if (!(x >= 0.0)) throw domain_error("penalty_l: argument must be nonnegative");
    return std::max(1.0, 0.5 * x);
}

/// `total` split into `parts` near-equal integers, the remainder on the leading run.
inline std::vector<int> allocate_even(int total, int parts) {
    if (parts < 1 || total < 0) throw domain_error("allocate_even: bad arguments");
    std::vector<int> out(static_cast<std::size_t>(parts), total / parts);
    for (int i = 0; i < total % parts; ++i) ++out[static_cast<std::size_t>(i)];
    return out;
}

/// Sum of |c_i - c_{i+1}| around a ring (M = 1 contributes nothing).
inline long ring_imbalance(const std::vector<int>& c) {
    if (c.size() < 2) return 0;
    long s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += std::abs(c[i] - c[(i + 1) % c.size()]);
    return s;
}

/// Sum of |c_i - c_{i+1}| along a chain.
inline long chain_imbalance(const std::vector<int>& c) {
    long s = 0;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) s += std::abs(c[i] - c[i + 1]);
    return s;
}

/// 4(N - M) + M^2 + N^2/M^2.
inline double plan_objective_2d(int n, int m) {
    const double dn = n, dm = m;
    return 4.0 * (dn - dm) + dm * dm + dn * dn / (dm * dm);
}

/// Two-dimensional plan with an explicit number of directions.
inline CountPlan plan_2d(int n_total, int m) {
    if (m < 1 || n_total < 2 * m) throw domain_error("plan_2d: need 1 <= M and N >= 2M");
    CountPlan p{2, n_total, m, {m}, {allocate_even(n_total, m)}};
    validate_plan(p);
    return p;
}

inline CountPlan optimize_counts_2d(int n_total) {
    if (n_total < 4) throw domain_error("optimize_counts_2d: N must be >= 4");
    int best = 1;
    for (int m = 2; 2 * m <= n_total; ++m)
        if (plan_objective_2d(n_total, m) < plan_objective_2d(n_total, best)) best = m;
    return plan_2d(n_total, best);
}

/// (M - 1)^2 + (N / 4M) L(shell imbalance) for even shell totals; the constant 7N is dropped.
inline double plan_objective_3d(int n, int m) {
    const auto shells = allocate_even(n, m);
    return std::pow(m - 1.0, 2) + n / (4.0 * m) * penalty_l(static_cast<double>(chain_imbalance(shells)));
}

namespace detail {

inline CountPlan shell_plan(int d, int n_total, const std::vector<int>& shells, const std::vector<int>& ks) {
    CountPlan p;
    p.d = d;
    p.n_total = n_total;
    p.m_shells = static_cast<int>(shells.size());
    p.k_per_shell = ks;
    for (std::size_t j = 0; j < shells.size(); ++j) p.n_per_direction.push_back(allocate_even(shells[j], ks[j]));
    validate_plan(p);
    return p;
}

inline int clamp_directions(double k, int shell_total) {
    return std::clamp(static_cast<int>(std::nearbyint(k)), 1, std::max(1, shell_total / 2));
}

}  // namespace detail

/// Three-dimensional plan with an explicit number of shells.
inline CountPlan plan_3d(int n_total, int m) {
    if (m < 2 || n_total < 2 * m) throw domain_error("plan_3d: need M >= 2 and N >= 2M");
    const auto shells = allocate_even(n_total, m);
    std::vector<int> ks;
    for (int s : shells) ks.push_back(detail::clamp_directions(std::sqrt(2.0 * s), s));
    return detail::shell_plan(3, n_total, shells, ks);
}

inline CountPlan optimize_counts_3d(int n_total) {
    if (n_total < 8) throw domain_error("optimize_counts_3d: N must be >= 8");
    int best = 2;
    for (int m = 3; 2 * m <= n_total; ++m)
        if (plan_objective_3d(n_total, m) < plan_objective_3d(n_total, best)) best = m;
    return plan_3d(n_total, best);
}

/// Rounded asymptotic plan for d >= 4: M = N^{1/d}/2 shells, N^{1/2 - 1/(2d)} points per direction.
inline CountPlan optimize_counts_d(int n_total, int d) {
    if (d < 4) throw domain_error("optimize_counts_d: d must be >= 4 (use the 2-D/3-D optimizers)");
    if (n_total < 1) throw domain_error("optimize_counts_d: N must be positive");
    const double n = n_total;
    const int m = static_cast<int>(std::nearbyint(std::pow(n, 1.0 / d) / 2.0));
    if (m < 2) throw domain_error("optimize_counts_d: N too small, fewer than two shells");
    if (n_total < 2 * m) throw domain_error("optimize_counts_d: N too small for the shell count");
    const double per_direction = std::max(2.0, std::nearbyint(std::pow(n, 0.5 - 0.5 / d)));
    const auto shells = allocate_even(n_total, m);
    std::vector<int> ks;
    for (int s : shells) ks.push_back(detail::clamp_directions(s / per_direction, s));
    return detail::shell_plan(d, n_total, shells, ks);
}

inline CountPlan optimize_counts(int n_total, int d) {
    if (d == 2) return optimize_counts_2d(n_total);
    if (d == 3) return optimize_counts_3d(n_total);
    return optimize_counts_d(n_total, d);
}

inline bool all_counts_even(const CountPlan& p) {
    for (const auto& shell : p.n_per_direction)
        for (int c : shell)
            if (c % 2 != 0) return false;
    return true;
}

/// Best plan whose per-direction counts are all even, as the radial solver requires.
/// Falls back from the unconstrained optimum by scanning M in increasing objective order.
inline CountPlan buildable_counts(int n_total, int d) {
    auto best = optimize_counts(n_total, d);
    if (all_counts_even(best)) return best;
    if (d != 2 && d != 3) throw domain_error("buildable_counts: optimal plan has odd counts");
    std::vector<std::pair<double, int>> order;
    for (int m = d == 2 ? 1 : 2; 2 * m <= n_total; ++m)
        order.emplace_back(d == 2 ? plan_objective_2d(n_total, m) : plan_objective_3d(n_total, m), m);
    std::ranges::sort(order);
    for (const auto& [obj, m] : order) {
        auto p = d == 2 ? plan_2d(n_total, m) : plan_3d(n_total, m);
        if (all_counts_even(p)) return p;
    }
    throw domain_error("buildable_counts: no plan with even counts");
}

/// Cdf of one polar angle of a uniform direction on the unit hemisphere in R^d, theta in [0, pi/2].
inline double polar_cdf(double theta, int d) {
    if (d < 3) throw domain_error("polar_cdf: d must be >= 3");
    if (theta <= 0.0) return 0.0;
    if (theta >= 0.5 * std::numbers::pi) return 1.0;
    if (d == 3) return 1.0 - std::cos(theta);
    const double s = std::sin(theta);
    return regularized_incomplete_beta(s * s, 0.5 * (d - 1), 0.5);
}

namespace detail {

inline QuadratureSpec grid_spec() { return QuadratureSpec{1e-15, 1e-14, 60}; }

// Inverse of a cdf on [lo, hi] at `levels`, with exact endpoints.
inline std::vector<double> invert_levels(const std::function<double(double)>& f, const std::vector<double>& levels,
                                         double lo, double hi) {
    std::vector<double> out;
    for (double u : levels) {
        if (u <= 0.0) out.push_back(lo);
        else if (u >= 1.0) out.push_back(hi);
        else out.push_back(invert_monotone(f, u, lo, hi, grid_spec()));
    }
    return out;
}

inline std::vector<double> chain_levels(int m) {
    std::vector<double> u;
    for (int j = 0; j < m; ++j) u.push_back(static_cast<double>(j) / (m - 1));
    return u;
}

inline std::vector<double> ring_levels(int m) {
    std::vector<double> u;
    for (int j = 0; j < m; ++j) u.push_back(static_cast<double>(j) / m);
    return u;
}

}  // namespace detail

/// theta_j = F_d^{-1}((j-1)/(M-1)), j = 1..M.
inline std::vector<double> polar_grid(int m_shells, int d) {
    if (m_shells < 2) throw domain_error("polar_grid: need at least two shells");
    if (d < 3) throw domain_error("polar_grid: d must be >= 3");
    const double half_pi = 0.5 * std::numbers::pi;
    if (d == 3) {
        std::vector<double> out;
        for (double u : detail::chain_levels(m_shells)) out.push_back(u >= 1.0 ? half_pi : std::acos(1.0 - u));
        return out;
    }
    return detail::invert_levels([d](double t) { return polar_cdf(t, d); }, detail::chain_levels(m_shells), 0.0,
                                 half_pi);
}

/// Angular cdfs of the first excited states.
inline double excited_angle_cdf_2d(double theta) {
    return (theta + std::sin(theta) * std::cos(theta)) / std::numbers::pi;
}
inline double excited_polar_raw_3d(double theta) { return (std::cos(3.0 * theta) - 9.0 * std::cos(theta)) / 8.0; }
inline double excited_polar_cdf_3d(double theta) { return excited_polar_raw_3d(theta) + 1.0; }
inline double excited_azimuth_cdf_3d(double phi) {
    return (phi - std::sin(phi) * std::cos(phi)) / (2.0 * std::numbers::pi);
}

/// Coordinates in which the angular terms of the potential measure spacing.
struct AngularModel {
    std::function<double(double)> angle_map;  // d = 2 ring coordinate
    double angle_weight = std::numbers::pi;
    double angle_period = std::numbers::pi;
    std::function<double(double)> polar_map;  // d >= 3 chain coordinate
    std::function<double(double)> azimuth_map;
    double azimuth_period = 2.0 * std::numbers::pi;
};

inline AngularModel ground_model(int d) {
    AngularModel m;
    m.angle_map = [](double t) { return t; };
    if (d >= 3) m.polar_map = [d](double t) { return polar_cdf(t, d); };
    m.azimuth_map = [](double p) { return p; };
    return m;
}

struct Direction {
    int shell = 0;
    int index = 0;
    std::vector<double> polar;     // d-2 angles; for d = 2 the single direction angle in [0, pi)
    std::optional<double> azimuth;  // absent for d = 2
    std::shared_ptr<const RadialSolution> radial;
};

class MiwConfiguration {
public:
    MiwConfiguration(CountPlan plan, std::vector<Direction> directions, int radial_k, std::vector<int> state_label,
                     AngularModel model)
        : plan_(std::move(plan)), directions_(std::move(directions)), radial_k_(radial_k),
          state_label_(std::move(state_label)), model_(std::move(model)) {
        validate_plan(plan_);
        if (static_cast<int>(directions_.size()) != plan_.direction_count())
            throw domain_error("MiwConfiguration: direction list does not match the plan");
        std::size_t at = 0;
        for (std::size_t j = 0; j < plan_.n_per_direction.size(); ++j)
            for (int count : plan_.n_per_direction[j]) {
                const Direction& dir = directions_[at++];
                if (!dir.radial || dir.radial->n_points() != count)
                    throw domain_error("MiwConfiguration: radial sequence size does not match the plan");
                const std::size_t want = plan_.d == 2 ? 1 : static_cast<std::size_t>(plan_.d - 2);
                if (dir.polar.size() != want || dir.azimuth.has_value() != (plan_.d >= 3))
                    throw domain_error("MiwConfiguration: angle shape does not match d");
            }
    }

    [[nodiscard]] const CountPlan& plan() const noexcept { return plan_; }
    [[nodiscard]] int d() const noexcept { return plan_.d; }
    [[nodiscard]] int n_points() const noexcept { return plan_.n_total; }
    [[nodiscard]] int radial_k() const noexcept { return radial_k_; }
    [[nodiscard]] const std::vector<Direction>& directions() const noexcept { return directions_; }
    [[nodiscard]] const std::vector<int>& state_label() const noexcept { return state_label_; }
    [[nodiscard]] const AngularModel& model() const noexcept { return model_; }

    /// First direction of shell j (shells share polar angles).
    [[nodiscard]] const Direction& shell_front(std::size_t j) const {
        std::size_t at = 0;
        for (std::size_t s = 0; s < j; ++s) at += plan_.n_per_direction[s].size();
        return directions_.at(at);
    }

private:
    CountPlan plan_;
    std::vector<Direction> directions_;
    int radial_k_;
    std::vector<int> state_label_;
    AngularModel model_;
};

/// (k+1)^2 sum_n [1/(R(r_{n+1}) - R(r_n)) - 1/(R(r_n) - R(r_{n-1}))]^2 |r_n|^{2k}, R = signed power k+1,
/// with the out-of-range reciprocals taken as 0.
inline double radial_potential(std::span<const double> r, int k) {
    if (k < 0) throw domain_error("radial_potential: k must be nonnegative");
    if (r.size() < 2) throw domain_error("radial_potential: degenerate direction with fewer than two points");
    const std::size_t n = r.size();
    std::vector<double> big(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (r[i] == 0.0) throw domain_error("radial_potential: zero radius");
        big[i] = signed_power(r[i], k + 1);
    }
    std::vector<double> recip(n + 1, 0.0);  // recip[i] = 1/(R(r_{i+1}) - R(r_i)) for gaps 1..n-1
    for (std::size_t i = 1; i < n; ++i) {
        const double gap = big[i] - big[i - 1];
        if (gap == 0.0) throw domain_error("radial_potential: coincident radii");
        recip[i] = 1.0 / gap;
    }
    std::vector<double> terms(n);
    const double scale = static_cast<double>((k + 1) * (k + 1));
    for (std::size_t i = 0; i < n; ++i) {
        const double bracket = recip[i + 1] - recip[i];
        terms[i] = scale * bracket * bracket * std::pow(std::abs(r[i]), 2 * k);
    }
    return pairwise_sum(terms);
}

namespace detail {

// sum over ring neighbours of 1/gap for values on a circle of the given period.
inline double ring_reciprocal_sum(std::vector<double> v, double period) {
    std::sort(v.begin(), v.end());
    std::vector<double> terms;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double gap = i + 1 < v.size() ? v[i + 1] - v[i] : period - (v.back() - v.front());
        if (!(gap > 0.0)) throw domain_error("interworld_potential: coincident angles");
        terms.push_back(1.0 / gap);
    }
    return pairwise_sum(terms);
}

inline double chain_reciprocal_sum(const std::vector<double>& v) {
    std::vector<double> terms;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double gap = std::abs(v[i + 1] - v[i]);
        if (!(gap > 0.0)) throw domain_error("interworld_potential: coincident polar angles");
        terms.push_back(1.0 / gap);
    }
    return pairwise_sum(terms);
}

}  // namespace detail

/// Breakdown of the interworld potential.
struct PotentialTerms {
    double radial = 0.0;
    double polar = 0.0;    // d = 2: the single angular ring term
    double azimuth = 0.0;  // d >= 3 only
    double direction_counts = 0.0;
    double shell_counts = 0.0;  // d >= 3 only
    [[nodiscard]] double total() const { return radial + polar + azimuth + direction_counts + shell_counts; }
};

inline PotentialTerms potential_terms(const MiwConfiguration& cfg) {
    const auto& plan = cfg.plan();
    const int d = plan.d;
    PotentialTerms t;
    std::vector<double> radial;
    for (const auto& dir : cfg.directions()) radial.push_back(radial_potential(dir.radial->points(), cfg.radial_k()));
    t.radial = pairwise_sum(radial);
    const double n = plan.n_total;
    if (d == 2) {
        std::vector<double> v;
        for (const auto& dir : cfg.directions()) v.push_back(cfg.model().angle_map(dir.polar[0]));
        t.polar = cfg.model().angle_weight * detail::ring_reciprocal_sum(v, cfg.model().angle_period);
        const double m = plan.m_shells;
        t.direction_counts =
            n * n / (m * m) * penalty_l(static_cast<double>(ring_imbalance(plan.n_per_direction[0])));
        return t;
    }
    const std::size_t shells = plan.n_per_direction.size();
    double polar = 0.0;
    for (int l = 0; l < d - 2; ++l) {
        std::vector<double> v;
        for (std::size_t j = 0; j < shells; ++j)
            v.push_back(cfg.model().polar_map(cfg.shell_front(j).polar[static_cast<std::size_t>(l)]));
        polar += detail::chain_reciprocal_sum(v);
    }
    t.polar = polar / (d - 2);
    std::vector<double> az_terms, count_terms;
    std::vector<int> shell_totals;
    std::size_t at = 0;
    for (std::size_t j = 0; j < shells; ++j) {
        std::vector<double> v;
        for (std::size_t q = 0; q < plan.n_per_direction[j].size(); ++q)
            v.push_back(cfg.model().azimuth_map(*cfg.directions()[at++].azimuth));
        az_terms.push_back(0.5 * std::numbers::pi * detail::ring_reciprocal_sum(v, cfg.model().azimuth_period));
        const double nj = plan.shell_total(j), kj = plan.k_per_shell[j];
        count_terms.push_back(nj * nj / (kj * kj) *
                              penalty_l(static_cast<double>(ring_imbalance(plan.n_per_direction[j]))));
        shell_totals.push_back(plan.shell_total(j));
    }
    t.azimuth = pairwise_sum(az_terms);
    t.direction_counts = pairwise_sum(count_terms);
    t.shell_counts = n / (4.0 * (d - 2) * std::pow(static_cast<double>(plan.m_shells), d - 2)) *
                     penalty_l(static_cast<double>(chain_imbalance(shell_totals)));
    return t;
}

inline double interworld_potential(const MiwConfiguration& cfg) { return potential_terms(cfg).total(); }

inline double hamiltonian(const MiwConfiguration& cfg) {
    std::vector<double> sq;
    for (const auto& dir : cfg.directions())
        for (double r : dir.radial->points()) sq.push_back(r * r);
    return interworld_potential(cfg) + pairwise_sum(sq);
}

/// Angle placement for a plan: d = 2 direction angles, polar angle per shell, azimuths per shell.
struct AngleLayout {
    std::vector<double> ring;                    // d = 2
    std::vector<double> polar;                   // d >= 3, one angle per shell (repeated in all d-2 slots)
    std::vector<std::vector<double>> azimuths;   // d >= 3
};

inline MiwConfiguration assemble_configuration(const CountPlan& plan, int radial_k, const AngleLayout& layout,
                                               std::vector<int> state_label, AngularModel model,
                                               const RadialOptions& opt = {}) {
    validate_plan(plan);
    std::map<int, std::shared_ptr<const RadialSolution>> cache;
    auto radial = [&](int count) {
        auto it = cache.find(count);
        if (it == cache.end())
            it = cache.emplace(count, std::make_shared<const RadialSolution>(solve_ground_state(radial_k, count, opt)))
                     .first;
        return it->second;
    };
    std::vector<Direction> dirs;
    if (plan.d == 2) {
        if (layout.ring.size() != plan.n_per_direction[0].size())
            throw domain_error("assemble_configuration: one angle per direction required");
        for (std::size_t j = 0; j < layout.ring.size(); ++j)
            dirs.push_back({0, static_cast<int>(j), {layout.ring[j]}, std::nullopt, radial(plan.n_per_direction[0][j])});
    } else {
        if (layout.polar.size() != plan.n_per_direction.size() || layout.azimuths.size() != layout.polar.size())
            throw domain_error("assemble_configuration: one polar angle and azimuth list per shell required");
        for (std::size_t j = 0; j < layout.polar.size(); ++j) {
            if (layout.azimuths[j].size() != plan.n_per_direction[j].size())
                throw domain_error("assemble_configuration: azimuth count does not match K_j");
            for (std::size_t q = 0; q < layout.azimuths[j].size(); ++q)
                dirs.push_back({static_cast<int>(j), static_cast<int>(q),
                                std::vector<double>(static_cast<std::size_t>(plan.d - 2), layout.polar[j]),
                                layout.azimuths[j][q], radial(plan.n_per_direction[j][q])});
        }
    }
    return MiwConfiguration(plan, std::move(dirs), radial_k, std::move(state_label), std::move(model));
}

/// Ground state for a given plan: uniform ring / F_d-quantile polar grid / uniform azimuths.
inline MiwConfiguration build_ground_state(const CountPlan& plan, const RadialOptions& opt = {}) {
    AngleLayout layout;
    const double pi = std::numbers::pi;
    if (plan.d == 2) {
        for (int j = 0; j < plan.m_shells; ++j) layout.ring.push_back(j * pi / plan.m_shells);
    } else {
        layout.polar = polar_grid(plan.m_shells, plan.d);
        for (int kj : plan.k_per_shell) {
            std::vector<double> az;
            for (int q = 0; q < kj; ++q) az.push_back(2.0 * pi * q / kj);
            layout.azimuths.push_back(az);
        }
    }
    return assemble_configuration(plan, plan.d - 1, layout, std::vector<int>(static_cast<std::size_t>(plan.d), 0),
                                  ground_model(plan.d), opt);
}

inline MiwConfiguration build_ground_state(int n_total, int d, const RadialOptions& opt = {}) {
    return build_ground_state(buildable_counts(n_total, d), opt);
}

/// Normalized angular cdfs for an excited state. Grids are placed at cdf quantiles and the
/// potential measures spacing in cdf units (period 1 for rings).
struct ExcitedLaws {
    int radial_k = 0;
    std::function<double(double)> angle_cdf;    // d = 2, on [0, pi)
    std::function<double(double)> polar_cdf;    // d = 3, on [0, pi/2]
    std::function<double(double)> azimuth_cdf;  // d = 3, on [0, 2 pi)
};

/// Presets for the (1,0) and (1,0,0) states; nullopt for any other pattern.
inline std::optional<ExcitedLaws> excited_preset(int d, const std::vector<int>& quanta) {
    if (d == 2 && quanta == std::vector<int>{1, 0}) return ExcitedLaws{3, excited_angle_cdf_2d, {}, {}};
    if (d == 3 && quanta == std::vector<int>{1, 0, 0})
        return ExcitedLaws{4, {}, excited_polar_cdf_3d, excited_azimuth_cdf_3d};
    return std::nullopt;
}

inline MiwConfiguration build_excited_state(const CountPlan& plan, const std::vector<int>& quanta,
                                            const ExcitedLaws& laws, const RadialOptions& opt = {}) {
    const int d = plan.d;
    if (d != 2 && d != 3) throw domain_error("build_excited_state: d must be 2 or 3");
    if (quanta.size() != static_cast<std::size_t>(d)) throw domain_error("build_excited_state: need d quantum numbers");
    const double pi = std::numbers::pi;
    AngleLayout layout;
    AngularModel model;
    if (d == 2) {
        if (!laws.angle_cdf) throw domain_error("build_excited_state: missing angular cdf");
        layout.ring = detail::invert_levels(laws.angle_cdf, detail::ring_levels(plan.m_shells), 0.0, pi);
        model.angle_map = laws.angle_cdf;
        model.angle_weight = 1.0;
        model.angle_period = 1.0;
    } else {
        if (!laws.polar_cdf || !laws.azimuth_cdf) throw domain_error("build_excited_state: missing angular cdfs");
        layout.polar = detail::invert_levels(laws.polar_cdf, detail::chain_levels(plan.m_shells), 0.0, 0.5 * pi);
        for (int kj : plan.k_per_shell)
            layout.azimuths.push_back(detail::invert_levels(laws.azimuth_cdf, detail::ring_levels(kj), 0.0, 2.0 * pi));
        model.polar_map = laws.polar_cdf;
        model.azimuth_map = laws.azimuth_cdf;
        model.azimuth_period = 1.0;
    }
    return assemble_configuration(plan, laws.radial_k, layout, quanta, std::move(model), opt);
}

inline MiwConfiguration build_excited_state(int n_total, int d, const std::vector<int>& quanta,
                                            const std::optional<ExcitedLaws>& laws = std::nullopt,
                                            const RadialOptions& opt = {}) {
    if (d != 2 && d != 3) throw domain_error("build_excited_state: d must be 2 or 3");
    auto chosen = laws ? laws : excited_preset(d, quanta);
    if (!chosen) throw domain_error("build_excited_state: unsupported quanta without caller-supplied cdfs");
    return build_excited_state(buildable_counts(n_total, d), quanta, *chosen, opt);
}

/// Cartesian coordinates of every point, ordered by shell, direction, radial index.
/// d = 2: (r cos t, r sin t). d >= 3: x_1 = r cos t_1, x_i = r sin t_1 ... sin t_{i-1} cos t_i,
/// closing with the azimuth pair (cos phi, sin phi).
inline std::vector<std::vector<double>> cartesian_points(const MiwConfiguration& cfg) {
    const int d = cfg.d();
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(cfg.n_points()));
    for (const auto& dir : cfg.directions()) {
        std::vector<double> unit(static_cast<std::size_t>(d));
        if (d == 2) {
            unit = {std::cos(dir.polar[0]), std::sin(dir.polar[0])};
        } else {
            double prod = 1.0;
            for (int l = 0; l < d - 2; ++l) {
                unit[static_cast<std::size_t>(l)] = prod * std::cos(dir.polar[static_cast<std::size_t>(l)]);
                prod *= std::sin(dir.polar[static_cast<std::size_t>(l)]);
            }
            unit[static_cast<std::size_t>(d - 2)] = prod * std::cos(*dir.azimuth);
            unit[static_cast<std::size_t>(d - 1)] = prod * std::sin(*dir.azimuth);
        }
        for (double r : dir.radial->points()) {
            std::vector<double> p(unit);
            for (double& c : p) c *= r;
            out.push_back(std::move(p));
        }
    }
    return out;
}

}  // namespace miw

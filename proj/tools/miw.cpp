// miw: solve, build, bound, measure, sweep and fit.

#include <miw/miw.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

constexpr const char* kVersion = "0.1.0";

struct Common {
    std::string out;
    std::string format = "csv";
    double tol = 1e-12;
    unsigned jobs = 0;
    int max_n = miw::kDefaultMaxPoints;
};

struct Args {
    int k = 1;
    int n = 0;
    int d = 2;
    std::string n_grid;
    std::string correction = "none";
    std::string quantity = "w1";
    std::string x_grid;
    std::string quanta;
    bool exact = false;
    bool matched = false;
};

std::string provenance(const std::string& sub, const std::vector<std::pair<std::string, std::string>>& flags) {
    std::string s = std::string("miw ") + kVersion + " " + sub;
    for (const auto& [name, value] : flags) s += " --" + name + (value.empty() ? "" : " " + value);
    return s;
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty() || c.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw miw::domain_error("cannot open output file '" + c.out + "'");
    f << text;
}

miw::RadialOptions radial_options(const Common& c) {
    miw::RadialOptions opt;
    opt.tol = c.tol;
    opt.max_points = c.max_n;
    return opt;
}

std::vector<int> n_values(const Args& a, const Common& c) {
    std::vector<int> ns;
    if (!a.n_grid.empty()) ns = miw::parse_n_grid(a.n_grid);
    else if (a.n > 0) ns = {a.n};
    else throw miw::domain_error("one of --n or --n-grid is required");
    for (int n : ns)
        if (n > c.max_n)
            throw miw::domain_error("N = " + std::to_string(n) + " exceeds the cap " + std::to_string(c.max_n) +
                                    " (set MIW_MAX_N to raise it)");
    return ns;
}

// Runs f over the grid on a worker pool; results keep grid order.
template <class R>
std::vector<R> sweep(const std::vector<int>& ns, unsigned jobs, const std::function<R(int)>& f) {
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(ns.size())));
    std::vector<std::optional<R>> slots(ns.size());
    std::vector<std::future<void>> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < ns.size(); i += workers) slots[i] = f(ns[i]);
        }));
    for (auto& p : pool) p.get();
    std::vector<R> out;
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

std::string flag_value(double v) { return miw::format_double(v); }

std::vector<std::pair<std::string, std::string>> base_flags(const Args& a, const Common& c, bool with_k) {
    std::vector<std::pair<std::string, std::string>> f;
    if (with_k) f.emplace_back("k", std::to_string(a.k));
    if (!a.n_grid.empty()) f.emplace_back("n-grid", a.n_grid);
    else f.emplace_back("n", std::to_string(a.n));
    f.emplace_back("tol", flag_value(c.tol));
    f.emplace_back("format", c.format);
    return f;
}

std::string cmd_radial(const Args& a, const Common& c) {
    const auto ns = n_values(a, c);
    if (ns.size() != 1) throw miw::domain_error("radial takes a single --n");
    const auto opt = radial_options(c);
    const auto sol = a.matched ? miw::kernel_matched_solve(a.k, ns[0], opt) : miw::solve_ground_state(a.k, ns[0], opt);
    if (c.format == "json") {
        auto j = miw::radial_to_json(sol);
        j["matched"] = a.matched;
        return j.dump(2) + "\n";
    }
    auto flags = base_flags(a, c, true);
    if (a.matched) flags.emplace_back("matched", "");
    return miw::radial_to_csv(sol, provenance("radial", flags));
}

std::vector<double> parse_x_grid(const std::string& s) {
    double lo = 0, hi = 0;
    int count = 0;
    char c1 = 0, c2 = 0, extra = 0;
    std::istringstream in(s);
    if (!(in >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || (in >> extra) || count < 2 || !(hi > lo))
        throw miw::domain_error("x-grid: expected lo:hi:count with lo < hi and count >= 2");
    std::vector<double> xs;
    for (int i = 0; i < count; ++i) xs.push_back(lo + (hi - lo) * i / (count - 1));
    return xs;
}

std::string cmd_kernel(const Args& a, const Common& c) {
    const miw::TiltedGaussianTarget t(a.k);
    miw::json rows = miw::json::array();
    std::ostringstream csv;
    auto flags = std::vector<std::pair<std::string, std::string>>{{"k", std::to_string(a.k)}};
    if (!a.x_grid.empty()) {
        flags.emplace_back("x-grid", a.x_grid);
        flags.emplace_back("format", c.format);
        csv << miw::csv_comment(provenance("kernel", flags)) << "x,tau,r_infinity,psi1,psi2\n";
        for (double x : parse_x_grid(a.x_grid)) {
            if (x == 0.0 && a.k >= 1) continue;  // kernel and R are singular at the origin
            const double tau = miw::stein_kernel(t, x), r = t.r_infinity(x), p1 = miw::psi1(t, x),
                         p2 = miw::psi2(t, x);
            csv << miw::format_double(x) << ',' << miw::format_double(tau) << ',' << miw::format_double(r) << ','
                << miw::format_double(p1) << ',' << miw::format_double(p2) << '\n';
            rows.push_back({{"x", x}, {"tau", tau}, {"r_infinity", r}, {"psi1", p1}, {"psi2", p2}});
        }
    } else {
        const auto ns = n_values(a, c);
        if (ns.size() != 1) throw miw::domain_error("kernel takes a single --n");
        const auto opt = radial_options(c);
        const auto sol =
            a.matched ? miw::kernel_matched_solve(a.k, ns[0], opt) : miw::solve_ground_state(a.k, ns[0], opt);
        const auto tau_n = miw::tau_discrete(sol);
        flags = base_flags(a, c, true);
        if (a.matched) flags.emplace_back("matched", "");
        csv << miw::csv_comment(provenance("kernel", flags)) << "i,x,tau_discrete,tau,abs_diff\n";
        for (int i = 0; i < sol.n_points(); ++i) {
            const double x = sol[static_cast<std::size_t>(i)];
            const double tau = x == 0.0 && a.k >= 1 ? std::numeric_limits<double>::infinity() : miw::stein_kernel(t, x);
            const double diff = std::abs(tau - tau_n[static_cast<std::size_t>(i)]);
            csv << i + 1 << ',' << miw::format_double(x) << ',' << miw::format_double(tau_n[static_cast<std::size_t>(i)])
                << ',' << miw::format_double(tau) << ',' << miw::format_double(diff) << '\n';
            rows.push_back({{"i", i + 1}, {"x", x}, {"tau_discrete", tau_n[static_cast<std::size_t>(i)]}, {"tau", tau},
                            {"abs_diff", diff}});
        }
    }
    if (c.format == "json") return miw::json{{"k", a.k}, {"rows", rows}}.dump(2) + "\n";
    return csv.str();
}

std::string cmd_bound(const Args& a, const Common& c, bool coupling) {
    const auto ns = n_values(a, c);
    const auto opt = radial_options(c);
    const int k = a.k;
    const bool exact = a.exact || coupling;
    auto reports = sweep<miw::BoundReport>(ns, c.jobs, [&](int n) {
        const auto sol = a.matched ? miw::kernel_matched_solve(k, n, opt) : miw::solve_ground_state(k, n, opt);
        const miw::TiltedGaussianTarget t(k);
        auto r = miw::wasserstein_bound(sol, t);
        if (exact) r.exact_w1 = miw::w1_empirical_vs_cdf(sol.points(), t).distance;
        if (coupling) {
            const miw::BiasTransform bt(sol);
            r.coupling_bound = miw::coupling_wasserstein_bound(bt).value;
            if (k >= 1) r.inverse_moment_l1 = miw::inverse_moment_gap(bt, 1).exact;
        }
        return r;
    });
    if (c.format == "json") {
        miw::json j = miw::json::array();
        for (const auto& r : reports) j.push_back(miw::bound_to_json(r));
        return j.dump(2) + "\n";
    }
    auto flags = base_flags(a, c, true);
    if (a.exact) flags.emplace_back("exact", "");
    if (a.matched) flags.emplace_back("matched", "");
    std::string s = miw::csv_comment(provenance(coupling ? "coupling" : "bound", flags)) + miw::bound_csv_header(coupling);
    for (const auto& r : reports) s += miw::bound_csv_row(r, coupling);
    return s;
}

std::string cmd_wasserstein(const Args& a, const Common& c) {
    const auto ns = n_values(a, c);
    const auto opt = radial_options(c);
    auto rows = sweep<miw::W1Result>(ns, c.jobs, [&](int n) {
        const auto sol = a.matched ? miw::kernel_matched_solve(a.k, n, opt) : miw::solve_ground_state(a.k, n, opt);
        return miw::w1_empirical_vs_cdf(sol.points(), miw::TiltedGaussianTarget(a.k));
    });
    if (c.format == "json") {
        miw::json j = miw::json::array();
        for (std::size_t i = 0; i < ns.size(); ++i)
            j.push_back({{"k", a.k}, {"N", ns[i]}, {"w1", rows[i].distance}, {"error_bound", rows[i].error_bound}});
        return j.dump(2) + "\n";
    }
    auto flags = base_flags(a, c, true);
    if (a.matched) flags.emplace_back("matched", "");
    std::string s = miw::csv_comment(provenance("wasserstein", flags)) + "k,N,w1,error_bound\n";
    for (std::size_t i = 0; i < ns.size(); ++i)
        s += std::to_string(a.k) + "," + std::to_string(ns[i]) + "," + miw::format_double(rows[i].distance) + "," +
             miw::format_double(rows[i].error_bound) + "\n";
    return s;
}

std::vector<int> parse_quanta(const std::string& s) {
    std::vector<int> q;
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        try {
            std::size_t used = 0;
            q.push_back(std::stoi(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw miw::domain_error("quanta: expected comma-separated integers, got '" + s + "'");
        }
    }
    return q;
}

std::string cmd_config(const Args& a, const Common& c) {
    if (a.n < 1) throw miw::domain_error("config requires --n");
    if (a.n > c.max_n)
        throw miw::domain_error("N = " + std::to_string(a.n) + " exceeds the cap " + std::to_string(c.max_n));
    const auto opt = radial_options(c);
    const auto cfg = a.quanta.empty()
                         ? miw::build_ground_state(a.n, a.d, opt)
                         : miw::build_excited_state(a.n, a.d, parse_quanta(a.quanta), std::nullopt, opt);
    if (c.format == "json") {
        auto j = miw::config_to_json(cfg);
        const auto terms = miw::potential_terms(cfg);
        j["hamiltonian"] = miw::hamiltonian(cfg);
        j["potential"] = {{"radial", terms.radial},
                          {"polar", terms.polar},
                          {"azimuth", terms.azimuth},
                          {"direction_counts", terms.direction_counts},
                          {"shell_counts", terms.shell_counts}};
        return j.dump(2) + "\n";
    }
    std::vector<std::pair<std::string, std::string>> flags{{"d", std::to_string(a.d)}, {"n", std::to_string(a.n)}};
    if (!a.quanta.empty()) flags.emplace_back("excited", a.quanta);
    flags.emplace_back("tol", flag_value(c.tol));
    flags.emplace_back("format", c.format);
    return miw::config_to_csv(cfg, provenance("config", flags));
}

std::string cmd_rates(const Args& a, const Common& c) {
    if (a.n_grid.empty()) throw miw::domain_error("rates requires --n-grid");
    const auto ns = n_values(a, c);
    const auto corr = miw::parse_correction(a.correction);
    if (!corr) throw miw::domain_error("unknown correction '" + a.correction + "'");
    if (a.quantity != "w1" && a.quantity != "bound" && a.quantity != "median" && a.quantity != "coupling")
        throw miw::domain_error("unknown quantity '" + a.quantity + "' (w1, bound, coupling, median)");
    const auto opt = radial_options(c);
    auto values = sweep<double>(ns, c.jobs, [&](int n) {
        const auto sol = miw::solve_ground_state(a.k, n, opt);
        if (a.quantity == "median") return sol[static_cast<std::size_t>(n / 2 - 1)];
        if (a.quantity == "bound") return miw::wasserstein_bound(sol, miw::TiltedGaussianTarget(a.k)).total_bound;
        if (a.quantity == "coupling") return miw::coupling_wasserstein_bound(miw::BiasTransform(sol)).value;
        return miw::w1_empirical_vs_cdf(sol.points(), miw::TiltedGaussianTarget(a.k)).distance;
    });
    std::vector<std::pair<int, double>> pairs;
    for (std::size_t i = 0; i < ns.size(); ++i) pairs.emplace_back(ns[i], values[i]);
    const auto fit = miw::fit_rate(pairs, *corr);
    if (c.format == "csv") {
        std::vector<std::pair<std::string, std::string>> flags{{"k", std::to_string(a.k)},
                                                               {"n-grid", a.n_grid},
                                                               {"correction", std::string(miw::correction_name(*corr))},
                                                               {"quantity", a.quantity},
                                                               {"tol", flag_value(c.tol)},
                                                               {"format", c.format}};
        std::string s = miw::csv_comment(provenance("rates", flags));
        s += miw::csv_comment("exponent=" + miw::format_double(fit.exponent) +
                              " intercept=" + miw::format_double(fit.intercept) +
                              " r_squared=" + miw::format_double(fit.r_squared));
        s += "N," + a.quantity + "\n";
        for (const auto& [n, v] : pairs) s += std::to_string(n) + "," + miw::format_double(v) + "\n";
        return s;
    }
    auto j = miw::rate_fit_to_json(fit);
    j["k"] = a.k;
    j["quantity"] = a.quantity;
    return j.dump(2) + "\n";
}

int max_n_from_env() {
    const char* env = std::getenv("MIW_MAX_N");
    if (!env || !*env) return miw::kDefaultMaxPoints;
    try {
        std::size_t used = 0;
        const long v = std::stol(env, &used);
        if (used == std::string(env).size() && v >= 2 && v <= 100000000) return static_cast<int>(v);
    } catch (const std::exception&) {
    }
    throw miw::domain_error(std::string("MIW_MAX_N must be an integer >= 2, got '") + env + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Many-interacting-worlds configurations, Stein kernels and Wasserstein bounds"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Common common;
    Args args;
    common.jobs = std::max(1u, std::thread::hardware_concurrency());

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", common.out, "Output file (default stdout)");
        sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--tol", common.tol, "Solver tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--jobs", common.jobs, "Worker threads for sweeps")->check(CLI::Range(1u, 1024u));
    };
    auto add_k = [&](CLI::App* sub) { sub->add_option("--k", args.k, "Tilt exponent")->check(CLI::Range(0, 300)); };
    auto add_n = [&](CLI::App* sub, bool grid) {
        sub->add_option("--n", args.n, "Number of points")->check(CLI::PositiveNumber);
        if (grid) sub->add_option("--n-grid", args.n_grid, "Sweep start:stop:step");
    };

    auto* radial = app.add_subcommand("radial", "Solve the radial recursion");
    add_k(radial);
    add_n(radial, false);
    radial->add_flag("--matched", args.matched, "Use the kernel-matched recursion");
    add_common(radial);

    auto* kernel = app.add_subcommand("kernel", "Stein kernels: discrete vs continuous, or on an x grid");
    add_k(kernel);
    add_n(kernel, false);
    kernel->add_option("--x-grid", args.x_grid, "lo:hi:count grid for the continuous kernel");
    kernel->add_flag("--matched", args.matched, "Use the kernel-matched recursion");
    add_common(kernel);

    auto* bound = app.add_subcommand("bound", "Stein-kernel Wasserstein upper bound");
    add_k(bound);
    add_n(bound, true);
    bound->add_flag("--exact", args.exact, "Also measure the exact distance and check dominance");
    bound->add_flag("--matched", args.matched, "Use the kernel-matched recursion");
    add_common(bound);

    auto* wasser = app.add_subcommand("wasserstein", "Exact W1 distance to the target");
    add_k(wasser);
    add_n(wasser, true);
    wasser->add_flag("--matched", args.matched, "Use the kernel-matched recursion");
    add_common(wasser);

    auto* config = app.add_subcommand("config", "Build a d-dimensional configuration");
    config->add_option("--d", args.d, "Dimension")->check(CLI::Range(2, 64));
    config->add_option("--n", args.n, "Number of points")->check(CLI::PositiveNumber);
    config->add_option("--excited", args.quanta, "Quantum numbers, e.g. 1,0 (default: ground state)");
    add_common(config);

    auto* rates = app.add_subcommand("rates", "Sweep N and fit a log-log rate");
    add_k(rates);
    add_n(rates, true);
    rates->add_option("--correction", args.correction, "none, sqrt-log or log6");
    rates->add_option("--quantity", args.quantity, "w1, bound, coupling or median");
    add_common(rates);

    auto* coupling = app.add_subcommand("coupling", "Bias-transform coupling bounds");
    add_k(coupling);
    add_n(coupling, true);
    add_common(coupling);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        common.max_n = max_n_from_env();
        std::string text;
        if (radial->parsed()) text = cmd_radial(args, common);
        else if (kernel->parsed()) text = cmd_kernel(args, common);
        else if (bound->parsed()) text = cmd_bound(args, common, false);
        else if (wasser->parsed()) text = cmd_wasserstein(args, common);
        else if (config->parsed()) text = cmd_config(args, common);
        else if (rates->parsed()) text = cmd_rates(args, common);
        else if (coupling->parsed()) text = cmd_bound(args, common, true);
        emit(common, text);
        return 0;
    } catch (const miw::domain_error& e) {
        std::cerr << "miw: " << e.what() << '\n';
        return 2;
    } catch (const miw::numerical_error& e) {
        std::cerr << "miw: numerical failure (" << e.cause() << "): " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "miw: " << e.what() << '\n';
        return 3;
    }
}

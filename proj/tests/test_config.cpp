#include <miw/config.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace miw;

namespace {

const double kPi = std::numbers::pi;

// Independent restatements of the count objectives, used for brute-force scans.
double objective_2d(double n, double m) { return 4 * (n - m) + m * m + n * n / (m * m); }

double objective_3d(int n, int m) {
    std::vector<int> shells(m, n / m);
    for (int i = 0; i < n % m; ++i) ++shells[i];
    int imbalance = 0;
    for (int i = 0; i + 1 < m; ++i) imbalance += std::abs(shells[i] - shells[i + 1]);
    return (m - 1.0) * (m - 1.0) + n / (4.0 * m) * std::max(1.0, imbalance / 2.0);
}

int brute_best(int n, int first, double (*f)(int, int)) {
    int best = first;
    for (int m = first + 1; 2 * m <= n; ++m)
        if (f(n, m) < f(n, best)) best = m;
    return best;
}

int total_points(const CountPlan& p) {
    int s = 0;
    for (const auto& row : p.n_per_direction)
        for (int c : row) s += c;
    return s;
}

}  // namespace

TEST(CircularAbs, Values) {
    EXPECT_NEAR(circular_abs(0.1, kPi - 0.1, kPi), 0.2, 1e-15);
    EXPECT_EQ(circular_abs(0.0, 0.0, 2 * kPi), 0.0);
    EXPECT_EQ(circular_abs(1.0, 2.0, 2 * kPi), 1.0);
    EXPECT_THROW(circular_abs(1.0, 2.0, 0.0), miw::domain_error);
}

TEST(Penalty, Values) {
    EXPECT_EQ(penalty_l(0.0), 1.0);
    EXPECT_EQ(penalty_l(2.0), 1.0);
    EXPECT_EQ(penalty_l(6.0), 3.0);
}

TEST(Plan2d, BruteForceAgreement) {
    for (int n : {4, 10, 50, 100, 484, 487, 1000}) {
        int best = 1;
        for (int m = 2; 2 * m <= n; ++m)
            if (objective_2d(n, m) < objective_2d(n, best)) best = m;
        const auto p = optimize_counts_2d(n);
        EXPECT_EQ(p.m_shells, best) << n;
        EXPECT_EQ(total_points(p), n);
    }
}

TEST(Plan2d, SmallN) {
    const auto p = optimize_counts_2d(4);
    EXPECT_TRUE(p.m_shells == 1 || p.m_shells == 2);
    for (int c : p.n_per_direction[0]) EXPECT_GE(c, 2);
}

TEST(Plan2d, FixedDirectionCount) {
    const auto p = plan_2d(484, 22);
    for (int c : p.n_per_direction[0]) EXPECT_EQ(c, 22);
}

TEST(Plan2d, RemainderOnContiguousRun) {
    const auto p = plan_2d(487, 22);
    const auto& c = p.n_per_direction[0];
    int heavy = 0;
    for (int v : c) heavy += v == 23;
    EXPECT_EQ(heavy, 3);
    int unequal_pairs = 0;
    for (std::size_t i = 0; i < c.size(); ++i) unequal_pairs += c[i] != c[(i + 1) % c.size()];
    EXPECT_LE(unequal_pairs, 2);
}

TEST(Plan2d, Rejections) {
    EXPECT_THROW(optimize_counts_2d(3), miw::domain_error);
    EXPECT_THROW(plan_2d(10, 6), miw::domain_error);
}

TEST(Plan3d, CubeOfFourteen) {
    const auto p = optimize_counts_3d(2744);
    EXPECT_EQ(p.m_shells, 7);
    for (int k : p.k_per_shell) EXPECT_EQ(k, 28);
    for (const auto& row : p.n_per_direction)
        for (int c : row) EXPECT_EQ(c, 14);
}

TEST(Plan3d, BruteForceScan) {
    for (int n : {64, 512, 1000, 2744, 5000}) EXPECT_EQ(optimize_counts_3d(n).m_shells, brute_best(n, 2, objective_3d)) << n;
}

TEST(Plan3d, CubeNumber) {
    const auto p = optimize_counts_3d(512);
    EXPECT_EQ(p.m_shells, 4);
    for (int k : p.k_per_shell) EXPECT_EQ(k, 16);
    for (const auto& row : p.n_per_direction)
        for (int c : row) EXPECT_EQ(c, 8);
}

TEST(PlanD, FourDimensions) {
    const auto p = optimize_counts(4096, 4);
    EXPECT_EQ(p.m_shells, 4);
    EXPECT_EQ(total_points(p), 4096);
    for (const auto& row : p.n_per_direction)
        for (int c : row) EXPECT_TRUE(c == 22 || c == 23) << c;
}

TEST(PlanD, FiveDimensionsInvariants) {
    const auto p = optimize_counts(100000, 5);
    EXPECT_EQ(total_points(p), 100000);
    for (const auto& row : p.n_per_direction)
        for (int c : row) EXPECT_GE(c, 2);
}

TEST(PlanD, TooSmall) { EXPECT_THROW(optimize_counts(32, 4), miw::domain_error); }

TEST(PolarGrid, Values) {
    const auto two = polar_grid(2, 3);
    EXPECT_EQ(two[0], 0.0);
    EXPECT_EQ(two[1], kPi / 2);
    EXPECT_NEAR(polar_grid(7, 3)[1], std::acos(5.0 / 6.0), 1e-15);
    const auto five = polar_grid(5, 5);
    for (int j = 0; j < 5; ++j) {
        const double c = std::cos(five[j]);
        EXPECT_NEAR(1 - 1.5 * c + 0.5 * c * c * c, j / 4.0, 1e-12);
    }
}

TEST(PolarCdf, FourDimensions) {
    const double t = 0.7;
    EXPECT_NEAR(polar_cdf(t, 4), (2 * t - std::sin(2 * t)) / kPi, 1e-13);
}

TEST(ExcitedCdf, Endpoints) {
    EXPECT_EQ(excited_angle_cdf_2d(0.0), 0.0);
    EXPECT_NEAR(excited_angle_cdf_2d(kPi), 1.0, 1e-15);
    EXPECT_NEAR(excited_polar_cdf_3d(0.0), 0.0, 1e-15);
    EXPECT_NEAR(excited_polar_cdf_3d(kPi / 2), 1.0, 1e-15);
    EXPECT_NEAR(excited_azimuth_cdf_3d(2 * kPi), 1.0, 1e-15);
}

TEST(Potential, OneDimensionalRayleighHamiltonian) {
    for (int n : {10, 100}) {
        const auto sol = solve_ground_state(1, n);
        double sq = 0.0;
        for (double r : sol.points()) sq += r * r;
        EXPECT_NEAR(radial_potential(sol.points(), 1) + sq, 4.0 * (n - 1), 1e-9 * 4 * (n - 1));
    }
}

TEST(Potential, RadialEnergyPerDirection) {
    for (int k = 0; k <= 3; ++k) {
        const auto sol = solve_ground_state(k, 14);
        double sq = 0.0;
        for (double r : sol.points()) sq += r * r;
        EXPECT_NEAR(radial_potential(sol.points(), k) + sq, 2.0 * (k + 1) * 13, 1e-9) << k;
    }
}

TEST(Potential, RadialPerturbationIncreasesEnergy) {
    const auto sol = solve_ground_state(2, 14);
    auto energy = [](const std::vector<double>& r) {
        double sq = 0.0;
        for (double v : r) sq += v * v;
        return radial_potential(r, 2) + sq;
    };
    const double base = energy(sol.points());
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> pick(0, 13);
    std::uniform_real_distribution<double> step(-1e-3, 1e-3);
    for (int trial = 0; trial < 20; ++trial) {
        auto r = sol.points();
        r[pick(rng)] += step(rng);
        EXPECT_GT(energy(r), base);
    }
}

TEST(Potential, RejectsCoincidentRadii) {
    EXPECT_THROW(radial_potential(std::vector<double>{1.0, 1.0}, 1), miw::domain_error);
}

TEST(Potential, UniformRingGivesSquare) {
    for (int m : {3, 8, 22}) {
        const auto cfg = build_ground_state(plan_2d(4 * m, m));
        EXPECT_NEAR(potential_terms(cfg).polar, double(m) * m, 1e-9 * m * m);
    }
}

TEST(Potential, PerturbedRingIncreases) {
    const auto plan = plan_2d(32, 8);
    AngleLayout layout;
    for (int j = 0; j < 8; ++j) layout.ring.push_back(j * kPi / 8);
    const auto uniform = assemble_configuration(plan, 1, layout, {0, 0}, ground_model(2));
    layout.ring[3] += 0.05;
    const auto moved = assemble_configuration(plan, 1, layout, {0, 0}, ground_model(2));
    EXPECT_GT(potential_terms(moved).polar, potential_terms(uniform).polar);
}

TEST(Hamiltonian, TwoDimensionalClosedForm) {
    const auto cfg = build_ground_state(484, 2);
    const int m = cfg.plan().m_shells;
    EXPECT_NEAR(hamiltonian(cfg), objective_2d(484, m), 1e-8 * objective_2d(484, m));
}

TEST(Hamiltonian, ThreeDimensionalTermByTerm) {
    const auto cfg = build_ground_state(2744, 3);
    const auto& p = cfg.plan();
    double expected = 6.0 * (2744 - p.direction_count()) + std::pow(p.m_shells - 1.0, 2) + 2744.0 / (4 * p.m_shells);
    for (std::size_t j = 0; j < p.k_per_shell.size(); ++j) {
        const double k = p.k_per_shell[j], nj = p.shell_total(j);
        expected += k * k / 4 + nj * nj / (k * k);
    }
    EXPECT_NEAR(hamiltonian(cfg), expected, 1e-8 * expected);
}

TEST(Build, SmallTwoDimensional) {
    const auto cfg = build_ground_state(4, 2);
    ASSERT_EQ(cfg.plan().m_shells, 2);
    ASSERT_EQ(cfg.directions().size(), 2u);
    EXPECT_EQ(cfg.directions()[0].polar[0], 0.0);
    EXPECT_NEAR(cfg.directions()[1].polar[0], kPi / 2, 1e-15);
    for (const auto& d : cfg.directions()) {
        EXPECT_NEAR((*d.radial)[0], 1.0, 1e-12);
        EXPECT_NEAR((*d.radial)[1], -1.0, 1e-12);
    }
}

TEST(Build, ThreeDimensionalStructure) {
    const auto cfg = build_ground_state(2744, 3);
    EXPECT_EQ(cfg.directions().size(), 7u * 28u);
    EXPECT_EQ(cfg.radial_k(), 2);
    const auto pts = cartesian_points(cfg);
    ASSERT_EQ(pts.size(), 2744u);
    std::size_t at = 0;
    for (const auto& dir : cfg.directions())
        for (double r : dir.radial->points()) {
            const auto& x = pts[at++];
            EXPECT_NEAR(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]), std::abs(r), 1e-12);
        }
}

TEST(Build, ExcitedTwoDimensional) {
    const auto cfg = build_excited_state(plan_2d(484, 22), {1, 0}, *excited_preset(2, {1, 0}));
    EXPECT_EQ(cfg.radial_k(), 3);
    EXPECT_EQ(cfg.directions().size(), 22u);
    for (std::size_t j = 0; j < 22; ++j)
        EXPECT_NEAR(excited_angle_cdf_2d(cfg.directions()[j].polar[0]), j / 22.0, 1e-12);
    // Quantile grid spaced 1/M in cdf units on a unit ring: the angular term is M^2.
    EXPECT_NEAR(potential_terms(cfg).polar, 22.0 * 22.0, 1e-6);
}

TEST(Build, ExcitedThreeDimensional) {
    const auto cfg = build_excited_state(2744, 3, {1, 0, 0});
    EXPECT_EQ(cfg.plan().m_shells, 7);
    EXPECT_EQ(cfg.radial_k(), 4);
    EXPECT_EQ(cfg.directions().size(), 7u * 28u);
    EXPECT_THROW(build_excited_state(100, 3, {2, 1, 0}), miw::domain_error);
}

TEST(Build, FallsBackToEvenCounts) {
    EXPECT_EQ(optimize_counts_2d(484).m_shells, 23);
    const auto p = buildable_counts(484, 2);
    EXPECT_EQ(p.m_shells, 22);
    EXPECT_TRUE(all_counts_even(p));
    EXPECT_EQ(build_ground_state(484, 2).plan().m_shells, 22);
    EXPECT_EQ(buildable_counts(2744, 3).m_shells, optimize_counts_3d(2744).m_shells);
}

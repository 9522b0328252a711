#include "latvar/cell.hpp"

#include "latvar/checks.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace latvar;

namespace {

std::set<std::pair<int, int>> point_set(const LatticePath& p) {
    std::set<std::pair<int, int>> s;
    for (const auto& q : p.points) s.insert({q[0], q[1]});
    return s;
}

}  // namespace

TEST(StrongPath, DefinitionCases) {
    const std::vector<LatticePoint> horizontal = {{0, 0}, {1, 0}, {2, 0}};
    EXPECT_TRUE(is_lattice_path(horizontal));
    EXPECT_FALSE(is_strong_path(horizontal));  // interior point lacks a vertical neighbor

    const std::vector<LatticePoint> staircase = {{0, 0}, {0, 1}, {1, 1}, {1, 2}};
    EXPECT_TRUE(is_lattice_path(staircase));
    EXPECT_TRUE(is_strong_path(staircase));

    const std::vector<LatticePoint> single = {{3, -2}};
    EXPECT_TRUE(is_strong_path(single));  // vacuous interior

    const std::vector<LatticePoint> diagonal = {{0, 0}, {1, 1}};
    EXPECT_FALSE(is_lattice_path(diagonal));
    EXPECT_FALSE(is_strong_path(diagonal));
    EXPECT_FALSE(is_lattice_path({}));
}

TEST(PathDisjointness, EdgeSharingRule) {
    const LatticePath a{{{0, 0}, {1, 0}, {1, 1}}};
    EXPECT_FALSE(are_disjoint(a, a));  // identical nontrivial paths share every edge

    const LatticePath touch{{{0, 0}, {0, 1}, {1, 1}}};
    EXPECT_TRUE(are_disjoint(a, touch));  // shares vertices (0,0),(1,1) but no edge

    const LatticePath edge{{{1, 0}, {0, 0}}};  // the edge {(0,0),(1,0)} reversed
    EXPECT_FALSE(are_disjoint(a, edge));
}

TEST(FlatChannel, CoordinateDirectionIsDoubledRow) {
    CellSpec spec;
    spec.T = 8;
    spec.ell = 1.0;
    spec.nu = Eigen::Vector2d(0, 1);
    const LatticePath ch = flat_channel(spec);
    EXPECT_TRUE(is_strong_path(ch.points));
    // Open cube |x| < 4: columns -3..3, each carrying the pair y in {0,1}.
    const auto pts = point_set(ch);
    EXPECT_EQ(pts.size(), 14u);
    for (int x = -3; x <= 3; ++x) {
        EXPECT_TRUE(pts.count({x, 0}));
        EXPECT_TRUE(pts.count({x, 1}));
    }
}

TEST(FlatChannel, DiagonalStaircaseSize) {
    CellSpec spec;
    spec.T = 8;
    spec.ell = 1.0;
    spec.nu = Eigen::Vector2d(1, 1).normalized();
    const LatticePath ch = flat_channel(spec);
    EXPECT_TRUE(is_strong_path(ch.points));
    const std::size_t n = point_set(ch).size();
    EXPECT_GE(n, 2u * 8u - 6u);  // roughly 2T points
    EXPECT_LE(n, 2u * 8u + 6u);
}

TEST(FlatChannel, TinyCubeRejected) {
    CellSpec spec;
    spec.T = 1;
    EXPECT_THROW(flat_channel(spec), std::invalid_argument);
}

TEST(FlatChannel, ValidAcrossAngleGrid) {
    std::mt19937 rng(301);
    const CheckResult r = check_channel_validity(rng);
    EXPECT_TRUE(r.pass) << r.detail;
}

TEST(CellEnergy, HandValues) {
    const Real T = 5;
    const GridPtr g = build_grid_from_shape(2, {5, 5}, 1.0);
    const Real ell = 0.8;
    EXPECT_DOUBLE_EQ(cell_energy(make_vfield_constant(g, 1.0), ell, T), 0.0);
    // v = 0 on all T^2 sites: (1/2T) * ell * T^2 = ell*T/2.
    EXPECT_DOUBLE_EQ(cell_energy(make_vfield_constant(g, 0.0), ell, T), ell * T / 2);
    // one interior zero: (1/2T)(ell + 4/ell).
    Vec v = Vec::Ones(25);
    v[12] = 0.0;  // center of the 5x5 block
    EXPECT_DOUBLE_EQ(cell_energy(make_vfield(g, v), ell, T), (ell + 4 / ell) / (2 * T));
}

TEST(CellSpecChecks, Validation) {
    CellSpec spec;
    EXPECT_NO_THROW(spec.validate());
    spec.T = 3;
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec = CellSpec{};
    spec.ell = 0;
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec = CellSpec{};
    spec.policy = ChannelPolicy::Given;  // no channel supplied
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec = CellSpec{};
    spec.policy = ChannelPolicy::LocalSearch;
    spec.search_budget = 0;
    EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(SolveCell, CoordinateDirectionNearProfileConstant) {
    CellSpec spec;
    spec.T = 64;
    spec.ell = 1.0;
    spec.nu = Eigen::Vector2d(0, 1);
    const CellResult res = solve_cell(spec);
    const Real c1 = c_ell_closed_form(1.0, 1);
    EXPECT_NEAR(res.phi, c1, 0.02 * c1);
    EXPECT_GE(res.v.values.minCoeff(), 0.0);
    EXPECT_LE(res.v.values.maxCoeff(), 1.0);
}

TEST(SolveCell, CenterColumnMatchesTruncated1dProblems) {
    CellSpec spec;
    spec.T = 64;
    spec.ell = 1.0;
    spec.nu = Eigen::Vector2d(0, 1);
    const CellResult res = solve_cell(spec);
    const Grid& g = *res.grid;
    // Column x = 0 decomposes into the two pinned half-profiles: upward
    // v(1)=0 -> v(31)=1 (N=30) and downward v(0)=0 -> v(-31)=1 (N=31).
    Real column = 0.0;
    for (int y = -31; y <= 31; ++y) {
        const int s = detail::site_of_lattice_point(g, LatticePoint(0, y));
        ASSERT_GE(s, 0);
        const Real vy = res.v.values[s];
        column += spec.ell * (vy - 1) * (vy - 1);
        if (y < 31) {
            const int s2 = detail::site_of_lattice_point(g, LatticePoint(0, y + 1));
            const Real d = res.v.values[s2] - vy;
            column += d * d / spec.ell;
        }
    }
    const Real oracle =
        c_ell_numeric(1.0, 1, 30).value + c_ell_numeric(1.0, 1, 31).value;
    EXPECT_NEAR(column, oracle, 1e-6 * oracle);
}

TEST(SolveCell, DiagonalDirectionNearScaledConstant) {
    CellSpec spec;
    spec.T = 64;
    spec.ell = 1.0;
    spec.nu = Eigen::Vector2d(1, 1).normalized();
    const CellResult res = solve_cell(spec);
    const Real target = std::sqrt(2.0) * c_ell_closed_form(1.0, 2);
    EXPECT_NEAR(res.phi, target, 0.03 * target);
}

TEST(SolveCell, GivenChannelPolicyUsesProvidedChannel) {
    CellSpec flat;
    flat.T = 16;
    flat.ell = 1.0;
    flat.nu = Eigen::Vector2d(0, 1);
    const LatticePath ch = flat_channel(flat);
    CellSpec given = flat;
    given.policy = ChannelPolicy::Given;
    given.channel = ch;
    const CellResult a = solve_cell(flat);
    const CellResult b = solve_cell(given);
    EXPECT_DOUBLE_EQ(a.phi, b.phi);
    EXPECT_EQ(point_set(a.channel), point_set(b.channel));
}

TEST(SolveCell, LargeEllLowerBound) {
    CellSpec spec;
    spec.T = 32;
    spec.ell = 4.0;
    spec.nu = angle_to_nu(30.0);
    EXPECT_GE(solve_cell(spec).phi, 2.0);  // phi >= ell/2
}

TEST(SolveCell, ConvergesInTTowardProfileConstant) {
    std::mt19937 rng(302);
    const CheckResult r = check_cell_t_convergence(rng);
    EXPECT_TRUE(r.pass) << r.detail;
}

TEST(SolveCell, LocalSearchNeverWorse) {
    std::mt19937 rng(303);
    const CheckResult r = check_local_search(rng);
    EXPECT_TRUE(r.pass) << r.detail;
}

TEST(ProfileConstants, GoldenRatioAndLimits) {
    EXPECT_NEAR(c_ell_closed_form(1.0, 1), (1.0 + std::sqrt(5.0)) / 2.0, 1e-12);
    EXPECT_NEAR(c_ell_closed_form(0.01, 1), 1.0, 1e-2);     // ell -> 0 limit
    EXPECT_NEAR(c_ell_closed_form(10.0, 1), 10.0 + 0.1, 1e-2);  // ell + 1/ell asymptotic
    EXPECT_THROW(c_ell_closed_form(0.0, 1), std::invalid_argument);
    EXPECT_THROW(c_ell_closed_form(1.0, 0), std::invalid_argument);
}

TEST(ProfileConstants, ClosedFormMatchesTridiagonalOracle) {
    std::mt19937 rng(304);
    const CheckResult r = check_profile_constants(rng);
    EXPECT_TRUE(r.pass) << r.detail;
}

TEST(ProfileConstants, NumericProfileShape) {
    const int N = 200;
    const ProfileResult pr = c_ell_numeric(1.0, 1, N);
    ASSERT_EQ(pr.profile.size(), N + 1);
    EXPECT_DOUBLE_EQ(pr.profile[0], 0.0);
    EXPECT_DOUBLE_EQ(pr.profile[N], 1.0);
    // The profile decays onto 1 geometrically, so past ~40 entries it equals
    // 1.0 to double precision; require strict growth only before saturation.
    for (int i = 0; i < N; ++i) EXPECT_LE(pr.profile[i], pr.profile[i + 1]);
    for (int i = 0; i < 30; ++i) EXPECT_LT(pr.profile[i], pr.profile[i + 1]);
    // Geometric decay 1 - v^i = r^i with the characteristic root in (0,1).
    const Real r = c_ell_root(1.0, 1);
    EXPECT_NEAR(r, (3.0 - std::sqrt(5.0)) / 2.0, 1e-12);
    for (int i = N / 2 - 10; i <= N / 2; ++i)
        EXPECT_NEAR(1.0 - pr.profile[i], std::pow(r, i), 1e-8);
    EXPECT_THROW(c_ell_numeric(1.0, 1, 4), std::invalid_argument);
}

TEST(ProfileConstants, RootSolvesCharacteristicEquation) {
    for (Real ell : {0.25, 1.0, 3.0})
        for (int n : {1, 2}) {
            const Real r = c_ell_root(ell, n);
            EXPECT_GT(r, 0.0);
            EXPECT_LT(r, 1.0);
            EXPECT_NEAR(r * r - (2 + ell * ell / n) * r + 1, 0.0, 1e-12);
        }
}

TEST(Extrapolation, RecoversExactInverseTModel) {
    const std::vector<Real> Ts = {32, 64, 128};
    std::vector<Real> phis;
    for (Real T : Ts) phis.push_back(1.7 - 2.3 / T);
    EXPECT_NEAR(extrapolate_inverse_T(Ts, phis), 1.7, 1e-12);
    EXPECT_THROW(extrapolate_inverse_T({32}, {1.0}), std::invalid_argument);
}

TEST(AngleToNu, UnitVectors) {
    const Eigen::Vector2d e1 = angle_to_nu(0.0);
    EXPECT_NEAR(e1[0], 1.0, 1e-15);
    EXPECT_NEAR(e1[1], 0.0, 1e-15);
    const Eigen::Vector2d e2 = angle_to_nu(90.0);
    EXPECT_NEAR(e2[0], 0.0, 1e-15);
    EXPECT_NEAR(e2[1], 1.0, 1e-15);
    for (Real a : {15.0, 30.0, 45.0, 75.0}) EXPECT_NEAR(angle_to_nu(a).norm(), 1.0, 1e-14);
}

TEST(RegimeReport, BoundsHoldOnReducedGrid) {
    const RegimeReport rep = regime_report({0.5, 2.0}, {0.0, 45.0, 90.0}, 32.0);
    EXPECT_TRUE(rep.all_ok);
    ASSERT_EQ(rep.rows.size(), 6u);
    for (const RegimeRow& row : rep.rows) {
        EXPECT_TRUE(row.lower_ok);
        EXPECT_GE(row.phi, row.ell / 2 - 1e-12);
        EXPECT_GE(row.phi, (row.T - std::sqrt(2.0)) / row.T - 1e-12);
        EXPECT_TRUE(row.upper_applicable);  // 0, 45, 90 are all coordinate/diagonal
        EXPECT_TRUE(row.upper_ok);
    }
    EXPECT_THROW(regime_report({1.0}, {0.0}, 8.0), std::invalid_argument);
}

TEST(RegimeReport, ObliqueAnglesSkipUpperBound) {
    const RegimeReport rep = regime_report({1.0}, {30.0}, 32.0);
    ASSERT_EQ(rep.rows.size(), 1u);
    EXPECT_FALSE(rep.rows[0].upper_applicable);
    EXPECT_TRUE(rep.rows[0].lower_ok);
}

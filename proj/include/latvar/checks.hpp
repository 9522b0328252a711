// Seeded property suites covering the contracts of the energy, solver, cell,
// and image modules. The CLI `check` command runs all of them and prints a
// pass/fail matrix; the unit tests call them individually. Tolerances are
// chosen so verdicts are robust to the seed.
#pragma once

#include "latvar/cell.hpp"
#include "latvar/energy.hpp"
#include "latvar/pgm.hpp"
#include "latvar/piecewise.hpp"
#include "latvar/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

namespace latvar {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline std::string fmt_real(Real v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
}

inline Vec random_vec(std::mt19937& rng, int n, Real lo, Real hi) {
    std::uniform_real_distribution<Real> dist(lo, hi);
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
}

// Dense stationary system of a quadratic objective recovered from energy
// evaluations only: for a quadratic f, the Hessian entry is exactly
// f(x+ei+ej) - f(x+ei) - f(x+ej) + f(x) and the gradient follows from two
// more evaluations. This gives a solver oracle that shares no assembly code
// with the production steps.
template <typename F>
inline Vec dense_quadratic_minimizer(const F& f, int n) {
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd b(n);
    Vec zero = Vec::Zero(n);
    const Real f0 = f(zero);
    std::vector<Real> fe(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Vec x = zero;
        x[i] = 1.0;
        fe[static_cast<std::size_t>(i)] = f(x);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            Vec x = zero;
            x[i] += 1.0;
            x[j] += 1.0;
            const Real fij = f(x);
            const Real h = fij - fe[static_cast<std::size_t>(i)] - fe[static_cast<std::size_t>(j)] + f0;
            if (i == j) {
                Vec y = zero;
                y[i] = -1.0;
                const Real fm = f(y);
                A(i, i) = fe[static_cast<std::size_t>(i)] + fm - 2 * f0;  // f'' along e_i
            } else {
                A(i, j) = h;
                A(j, i) = h;
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        Vec y = zero;
        y[i] = -1.0;
        b[i] = -(fe[static_cast<std::size_t>(i)] - f(y)) / 2.0;  // -gradient at 0
    }
    return A.ldlt().solve(b);
}

}  // namespace detail

// --- energy module -----------------------------------------------------

inline CheckResult check_energy_nonnegativity(std::mt19937& rng) {
    const GridPtr g1 = build_grid(1, {0, 0}, {1, 0}, 1.0 / 17);
    const GridPtr g2 = build_grid(2, {0, 0}, {1, 1}, 1.0 / 9);
    EnergyParams p;
    p.epsilon = 0.2;
    p.delta = g1->delta;
    bool ok = true;
    for (int rep = 0; rep < 20 && ok; ++rep) {
        for (const GridPtr& g : {g1, g2}) {
            EnergyParams q = p;
            q.delta = g->delta;
            const ScalarField u = make_ufield(g, detail::random_vec(rng, g->num_sites(), -3, 3));
            const ScalarField v = make_vfield(g, detail::random_vec(rng, g->num_sites(), 0, 1));
            const ScalarField d = make_ufield(g, detail::random_vec(rng, g->num_sites(), -3, 3));
            ok = ok && bulk_energy(u, v, q) >= 0 && surface_energy(v, q) >= 0 &&
                 total_energy(u, v, q) >= 0 && fidelity_energy(u, v, d, q) >= 0;
        }
    }
    const Real zero = total_energy(make_ufield_constant(g2, 2.5), make_vfield_constant(g2, 1.0),
                                   EnergyParams{0.2, g2->delta, 0, 1});
    ok = ok && zero == 0.0;
    return {"energy_nonnegativity", ok, ok ? "all energies >= 0; exact zero case" : "violation found"};
}

inline CheckResult check_energy_locality(std::mt19937& rng) {
    const GridPtr g = build_grid(1, {0, 0}, {1, 0}, 1.0 / 24);
    EnergyParams p{0.25, g->delta, 0.01, 1.0};
    const ScalarField u = make_ufield(g, detail::random_vec(rng, g->num_sites(), -2, 2));
    const ScalarField v = make_vfield(g, detail::random_vec(rng, g->num_sites(), 0, 1));
    const auto w1 = [](Real x, Real) { return x > 0.05 && x < 0.3; };
    const auto w2 = [](Real x, Real) { return x > 0.55 && x < 0.85; };
    SubRegion u1 = SubRegion::of(*g, w1);
    SubRegion u2 = SubRegion::of(*g, w2);
    SubRegion both = SubRegion::of(*g, [&](Real x, Real y) { return w1(x, y) || w2(x, y); });
    const Real lhs = total_energy(u, v, p, &both);
    const Real rhs = total_energy(u, v, p, &u1) + total_energy(u, v, p, &u2);
    const bool ok = std::abs(lhs - rhs) <= 1e-13 * std::max<Real>(1, std::abs(lhs));
    return {"energy_locality", ok,
            "separated regions: |E(U1 u U2) - E(U1) - E(U2)| = " + detail::fmt_real(std::abs(lhs - rhs))};
}

inline CheckResult check_energy_translation(std::mt19937& rng) {
    const int w = 9, h = 7;
    const GridPtr g = build_grid_from_shape(2, {w, h}, 0.1);
    EnergyParams p{0.3, g->delta, 0, 1.0};
    // Random pattern on a 6x4 block, constant elsewhere; shift by one step.
    Vec u0 = Vec::Zero(g->num_sites());
    Vec v0 = Vec::Ones(g->num_sites());
    Vec u1 = u0;
    Vec v1 = v0;
    std::uniform_real_distribution<Real> du(-2, 2), dv(0, 1);
    for (int ix = 0; ix < 6; ++ix)
        for (int iy = 0; iy < 4; ++iy) {
            const Real uu = du(rng);
            const Real vv = dv(rng);
            u0[g->site_of_box[g->box_index(ix, iy)]] = uu;
            v0[g->site_of_box[g->box_index(ix, iy)]] = vv;
            u1[g->site_of_box[g->box_index(ix + 1, iy + 1)]] = uu;
            v1[g->site_of_box[g->box_index(ix + 1, iy + 1)]] = vv;
        }
    const Real d = g->delta;
    SubRegion r0 = SubRegion::of(*g, [&](Real x, Real y) { return x < 6.5 * d && y < 4.5 * d; });
    SubRegion r1 = SubRegion::of(*g, [&](Real x, Real y) {
        return x > 0.5 * d && x < 7.5 * d && y > 0.5 * d && y < 5.5 * d;
    });
    const ScalarField U0 = make_ufield(g, u0), V0 = make_vfield(g, v0);
    const ScalarField U1 = make_ufield(g, u1), V1 = make_vfield(g, v1);
    const Real e0 = total_energy(U0, V0, p, &r0);
    const Real e1 = total_energy(U1, V1, p, &r1);
    // Bulk term is invariant under u -> u + c.
    Vec uc = u0;
    for (int s = 0; s < g->num_sites(); ++s) uc[s] += 3.25;
    const Real f0 = bulk_energy(U0, V0, p, &r0);
    const Real fc = bulk_energy(make_ufield(g, uc), V0, p, &r0);
    const bool ok = std::abs(e0 - e1) <= 1e-12 * std::max<Real>(1, e0) &&
                    std::abs(f0 - fc) <= 1e-12 * std::max<Real>(1, f0);
    return {"energy_translation", ok,
            "shift gap " + detail::fmt_real(std::abs(e0 - e1)) + ", u+c gap " +
                detail::fmt_real(std::abs(f0 - fc))};
}

inline CheckResult check_energy_truncation(std::mt19937& rng) {
    const GridPtr g = build_grid(1, {0, 0}, {1, 0}, 1.0 / 32);
    EnergyParams p{0.2, g->delta, 0.005, 1.0};
    bool ok = true;
    Real worst = 0;
    for (int rep = 0; rep < 30; ++rep) {
        const ScalarField u = make_ufield(g, detail::random_vec(rng, g->num_sites(), -4, 4));
        const ScalarField v = make_vfield(g, detail::random_vec(rng, g->num_sites(), 0, 1));
        for (Real m : {0.0, 0.5, 1.5, 3.0, 10.0}) {
            const Real gap = total_energy(truncate(u, m), v, p) - total_energy(u, v, p);
            worst = std::max(worst, gap);
            ok = ok && gap <= 1e-12;
        }
    }
    return {"energy_truncation", ok, "max E(u^m) - E(u) = " + detail::fmt_real(worst)};
}

inline CheckResult check_energy_axis_symmetry(std::mt19937& rng) {
    const int w = 8, h = 8;
    const GridPtr g = build_grid_from_shape(2, {w, h}, 0.125);
    EnergyParams p{0.4, g->delta, 0.01, 1.0};
    const Vec u = detail::random_vec(rng, g->num_sites(), -2, 2);
    const Vec v = detail::random_vec(rng, g->num_sites(), 0, 1);
    const auto remap = [&](const Vec& src, auto&& f) {
        Vec out(g->num_sites());
        for (int ix = 0; ix < w; ++ix)
            for (int iy = 0; iy < h; ++iy) {
                const auto [jx, jy] = f(ix, iy);
                out[g->site_of_box[g->box_index(jx, jy)]] = src[g->site_of_box[g->box_index(ix, iy)]];
            }
        return out;
    };
    const auto swap_axes = [&](int ix, int iy) { return std::pair<int, int>(iy, ix); };
    const auto reflect = [&](int ix, int iy) { return std::pair<int, int>(w - 1 - ix, iy); };
    const Real e = total_energy(make_ufield(g, u), make_vfield(g, v), p);
    const Real es = total_energy(make_ufield(g, remap(u, swap_axes)), make_vfield(g, remap(v, swap_axes)), p);
    const Real er = total_energy(make_ufield(g, remap(u, reflect)), make_vfield(g, remap(v, reflect)), p);
    const bool ok = std::abs(e - es) <= 1e-12 * std::max<Real>(1, e) &&
                    std::abs(e - er) <= 1e-12 * std::max<Real>(1, e);
    return {"energy_axis_symmetry", ok,
            "swap gap " + detail::fmt_real(std::abs(e - es)) + ", reflect gap " +
                detail::fmt_real(std::abs(e - er))};
}

// Discrete-to-continuum comparison: the discrete energy dominates the
// continuum functional of the affine interpolants on a slightly shrunk
// interval.
inline CheckResult check_interpolation_bound(std::mt19937& rng, int pairs = 200) {
    const int sites = 64;
    Real worst = 1e9;
    bool ok = true;
    for (int rep = 0; rep < pairs; ++rep) {
        std::uniform_real_distribution<Real> dd(0.5, 2.0);
        const Real delta = 1.0 / sites;
        const Real epsilon = delta * dd(rng);  // delta <= eps up to factor in [0.5,2] -> enforce
        EnergyParams p{std::max(epsilon, delta), delta, 0, 1.0};
        const GridPtr g = build_grid_from_shape(1, {sites, 1}, delta, {delta / 2, 0});
        const ScalarField u = make_ufield(g, detail::random_vec(rng, sites, -1, 1));
        const ScalarField v = make_vfield(g, detail::random_vec(rng, sites, 0, 1));
        const Real lhs = total_energy(u, v, p);
        const Interp1D ui = affine_interpolate_1d(u);
        const Interp1D vi = affine_interpolate_1d(v);
        const Real a = ui.x.front() + 2 * delta;
        const Real b = ui.x.back() - 2 * delta;
        const Real rhs = continuum_at_1d(ui, vi, a, b, p.epsilon);
        worst = std::min(worst, lhs - rhs);
        ok = ok && lhs >= rhs - 1e-10;
    }
    return {"interpolation_bound", ok, "min E - AT = " + detail::fmt_real(worst)};
}

inline CheckResult check_rescaling_identity(std::mt19937& rng, int fields = 100) {
    Real worst = 0;
    bool ok = true;
    for (int rep = 0; rep < fields; ++rep) {
        std::uniform_real_distribution<Real> dd(0.05, 4.0);
        const bool two_d = rep % 2 == 0;
        const GridPtr g = two_d ? build_grid_from_shape(2, {6, 5}, dd(rng))
                                : build_grid_from_shape(1, {24, 1}, dd(rng));
        EnergyParams p;
        p.delta = g->delta;
        p.epsilon = dd(rng);
        p.eta = rep % 3 == 0 ? 0.01 : 0.0;
        const ScalarField w = make_ufield(g, detail::random_vec(rng, g->num_sites(), -2, 2));
        const ScalarField v = make_vfield(g, detail::random_vec(rng, g->num_sites(), 0, 1));
        const Real lhs = rescaled_energy(w, v, p);
        const Real scale = std::sqrt(p.delta / p.epsilon);
        Vec su = w.values * scale;
        const Real rhs = (p.epsilon / p.delta) * total_energy(make_ufield(g, std::move(su)), v, p);
        const Real rel = std::abs(lhs - rhs) / std::max<Real>(1, std::abs(rhs));
        worst = std::max(worst, rel);
        ok = ok && rel <= 1e-12;
    }
    return {"rescaling_identity", ok, "max rel gap = " + detail::fmt_real(worst)};
}

inline CheckResult check_recovery_pair(std::mt19937&) {
    const Real epsilon = 1.0 / 64;
    const Real delta = epsilon / 16;
    const int sites = static_cast<int>(std::lround(1.0 / delta));
    const GridPtr g = build_grid_from_shape(1, {sites, 1}, delta, {delta / 2, 0});
    EnergyParams p{epsilon, delta, 0, 1.0};
    const Real jump_x = 0.5;  // bond midpoint: sites sit at (k + 1/2) delta
    const auto [u, v] = recovery_pair_1d(g, jump_x, 5.0, p, 40.0);
    const Real e = total_energy(u, v, p);
    const bool ok = e >= 1.0 - 1e-6 && e <= 1.1;
    return {"recovery_pair", ok, "E = " + detail::fmt_real(e) + " (target [1-1e-6, 1.1])"};
}

// --- solver module ------------------------------------------------------

inline CheckResult check_dense_oracle(std::mt19937& rng) {
    bool ok = true;
    Real worst = 0;
    for (int rep = 0; rep < 6; ++rep) {
        const bool two_d = rep % 2 == 1;
        const GridPtr g = two_d ? build_grid_from_shape(2, {5, 4}, 0.2)
                                : build_grid_from_shape(1, {24, 1}, 1.0 / 24);
        const int n = g->num_sites();
        EnergyParams p{0.3, g->delta, rep % 3 == 0 ? 0.02 : 0.0, 0.7};
        SolveConfig cfg;
        const ScalarField v = make_vfield(g, detail::random_vec(rng, n, 0, 1));
        const ScalarField gd = make_ufield(g, detail::random_vec(rng, n, -2, 2));
        const ScalarField ustar = u_step(v, gd, p, cfg);
        const auto uobj = [&](const Vec& x) {
            const ScalarField u = make_ufield(g, x);
            return bulk_energy(u, v, p) + p.fidelity_weight * data_term(u, gd);
        };
        const Vec uref = detail::dense_quadratic_minimizer(uobj, n);
        const Real du = (ustar.values - uref).cwiseAbs().maxCoeff() /
                        std::max<Real>(1, uref.cwiseAbs().maxCoeff());
        const ScalarField u2 = make_ufield(g, detail::random_vec(rng, n, -2, 2));
        const ScalarField vstar = v_step(u2, p, cfg);
        const auto vobj = [&](const Vec& x) {
            // Evaluate without the [0,1] sentinel: the quadratic form extends
            // to all of R^n.
            EnergyParams q = p;
            q.eta = 0;  // eta is constant in v
            const ScalarField vv{g, FieldKind::U, x};
            return bulk_energy(u2, vv, q) + surface_energy(vv, q);
        };
        const Vec vref = detail::dense_quadratic_minimizer(vobj, n);
        const Real dv = (vstar.values - vref).cwiseAbs().maxCoeff() /
                        std::max<Real>(1, vref.cwiseAbs().maxCoeff());
        worst = std::max({worst, du, dv});
        ok = ok && du <= 1e-8 && dv <= 1e-8;
    }
    return {"solver_dense_oracle", ok, "max rel gap vs energy-derived dense solve = " + detail::fmt_real(worst)};
}

inline CheckResult check_monotone_traces(std::mt19937& rng, int runs = 50) {
    bool ok = true;
    Real worst = 0;
    for (int rep = 0; rep < runs; ++rep) {
        const GridPtr g = build_grid_from_shape(1, {32, 1}, 1.0 / 32);
        EnergyParams p{4.0 / 32, 1.0 / 32, 0, 1.0};
        SolveConfig cfg;
        cfg.max_outer_iters = 12;
        cfg.rel_energy_tol = 1e-12;
        const ScalarField gd = make_ufield(g, detail::random_vec(rng, 32, -1, 1));
        const SolveResult res = alternate_minimize(gd, p, cfg);
        const Real e0 = std::max<Real>(res.trace.front().total, 1);
        for (std::size_t k = 1; k < res.trace.size(); ++k) {
            const Real rise = res.trace[k].total - res.trace[k - 1].total;
            worst = std::max(worst, rise / e0);
            ok = ok && rise <= 1e-10 * e0;
        }
    }
    return {"solver_monotone_trace", ok, "max relative rise = " + detail::fmt_real(worst)};
}

inline CheckResult check_half_step_optimality(std::mt19937& rng) {
    const GridPtr g = build_grid_from_shape(1, {48, 1}, 1.0 / 48);
    EnergyParams p{8.0 / 48, 1.0 / 48, 0, 1.0};
    SolveConfig cfg;
    cfg.max_outer_iters = 60;
    cfg.rel_energy_tol = 1e-13;
    cfg.linear_tol = 1e-13;
    const ScalarField gd = make_ufield(g, detail::random_vec(rng, 48, -1, 1));
    const SolveResult res = alternate_minimize(gd, p, cfg);
    const Real base = fidelity_energy(res.u, res.v, gd, p);
    bool ok = true;
    Real worst = 0;
    std::uniform_int_distribution<int> site(0, 47);
    for (int rep = 0; rep < 100; ++rep) {
        const int s = site(rng);
        for (Real h : {1e-4, -1e-4}) {
            Vec u = res.u.values;
            u[s] += h;
            const Real eu = fidelity_energy(make_ufield(g, u), res.v, gd, p);
            Vec v = res.v.values;
            v[s] = std::clamp(v[s] + h, 0.0, 1.0);
            const Real ev = fidelity_energy(res.u, make_vfield(g, v), gd, p);
            worst = std::max({worst, base - eu, base - ev});
            ok = ok && eu >= base - 1e-8 * std::max<Real>(1, base) &&
                 ev >= base - 1e-8 * std::max<Real>(1, base);
        }
    }
    return {"solver_half_step_optimality", ok, "max decrease under perturbation = " + detail::fmt_real(worst)};
}

inline CheckResult check_max_principle(std::mt19937& rng) {
    bool ok = true;
    for (int rep = 0; rep < 20; ++rep) {
        const GridPtr g = build_grid_from_shape(1, {40, 1}, 1.0 / 40);
        EnergyParams p{0.1, 1.0 / 40, 0, 1.0};
        const ScalarField u = make_ufield(g, detail::random_vec(rng, 40, -20, 20));
        const ScalarField v = v_step(u, p, SolveConfig{});
        ok = ok && v.values.minCoeff() >= 0.0 && v.values.maxCoeff() <= 1.0;
    }
    return {"solver_max_principle", ok, ok ? "v_step output in [0,1]" : "bound violated"};
}

inline CheckResult check_datum_bound(std::mt19937& rng) {
    bool ok = true;
    Real worst = 0;
    for (int rep = 0; rep < 10; ++rep) {
        const GridPtr g = build_grid_from_shape(1, {64, 1}, 1.0 / 64);
        EnergyParams p{8.0 / 64, 1.0 / 64, 0, 1.0};
        SolveConfig cfg;
        cfg.max_outer_iters = 20;
        const ScalarField gd = make_ufield(g, detail::random_vec(rng, 64, -5, 5));
        const SolveResult res = alternate_minimize(gd, p, cfg);
        const Real bound = gd.values.cwiseAbs().maxCoeff();
        worst = std::max(worst, res.u.values.cwiseAbs().maxCoeff() - bound);
        ok = ok && res.u.values.cwiseAbs().maxCoeff() <= bound + 1e-9 * std::max<Real>(1, bound);
    }
    return {"solver_datum_bound", ok, "max |u|_inf - |g|_inf = " + detail::fmt_real(worst)};
}

// --- cell module --------------------------------------------------------

inline CheckResult check_channel_validity(std::mt19937&) {
    bool ok = true;
    std::string bad;
    for (Real T : {8.0, 16.0, 33.0})
        for (Real angle : {0.0, 15.0, 30.0, 45.0, 60.0, 75.0, 90.0}) {
            CellSpec spec;
            spec.T = T;
            spec.ell = 1.0;
            spec.nu = angle_to_nu(angle);
            try {
                const LatticePath ch = flat_channel(spec);
                if (!is_strong_path(ch.points)) throw std::runtime_error("not strong");
            } catch (const std::exception& e) {
                ok = false;
                bad += " T=" + detail::fmt_real(T) + ",angle=" + detail::fmt_real(angle) + ": " + e.what();
            }
        }
    return {"cell_channel_validity", ok, ok ? "flat channels valid on the angle grid" : bad};
}

inline CheckResult check_profile_constants(std::mt19937&) {
    bool ok = true;
    Real worst = 0;
    for (Real ell : {0.25, 0.5, 1.0, 2.0, 4.0})
        for (int n : {1, 2}) {
            const Real gap = std::abs(c_ell_closed_form(ell, n) - c_ell_numeric(ell, n, 200).value);
            worst = std::max(worst, gap);
            ok = ok && gap <= 1e-6;
        }
    return {"cell_profile_constants", ok, "max |closed - numeric| = " + detail::fmt_real(worst)};
}

inline CheckResult check_cell_t_convergence(std::mt19937&) {
    const Real target = c_ell_closed_form(1.0, 1);
    std::vector<Real> Ts = {16, 32, 64};
    std::vector<Real> phis;
    bool ok = true;
    Real prev_gap = 1e9;
    for (Real T : Ts) {
        CellSpec spec;
        spec.T = T;
        spec.ell = 1.0;
        spec.nu = Eigen::Vector2d(0, 1);
        const Real phi = solve_cell(spec).phi;
        phis.push_back(phi);
        const Real gap = std::abs(phi - target);
        ok = ok && gap <= 3.0 / T && gap <= prev_gap + 1e-12;
        prev_gap = gap;
    }
    const Real extr = extrapolate_inverse_T(Ts, phis);
    ok = ok && std::abs(extr - target) <= 5e-3 * target;
    return {"cell_t_convergence", ok,
            "|phi^T - c_1| = O(1/T), extrapolated = " + detail::fmt_real(extr)};
}

inline CheckResult check_local_search(std::mt19937&) {
    CellSpec flat;
    flat.T = 16;
    flat.ell = 1.0;
    flat.nu = angle_to_nu(30.0);
    const Real base = solve_cell(flat).phi;
    CellSpec ls = flat;
    ls.policy = ChannelPolicy::LocalSearch;
    ls.search_budget = 40;
    const Real refined = solve_cell(ls).phi;
    const bool ok = refined <= base + 1e-12;
    return {"cell_local_search", ok,
            "flat " + detail::fmt_real(base) + " -> searched " + detail::fmt_real(refined)};
}

// --- image I/O ----------------------------------------------------------

inline CheckResult check_pgm_roundtrip(std::mt19937& rng) {
    PgmImage img;
    img.width = 13;
    img.height = 7;
    img.maxval = 255;
    img.pixels.resize(13 * 7);
    std::uniform_int_distribution<int> d(0, 255);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(d(rng));
    const std::string path = "/tmp/latvar_roundtrip_check.pgm";
    write_pgm(path, img);
    const PgmImage back = read_pgm(path);
    const bool ok = back.width == img.width && back.height == img.height &&
                    back.maxval == img.maxval && back.pixels == img.pixels;
    return {"pgm_roundtrip", ok, ok ? "byte-exact" : "mismatch"};
}

inline std::vector<CheckResult> run_all_checks(unsigned seed) {
    std::mt19937 rng(seed);
    std::vector<CheckResult> out;
    out.push_back(check_energy_nonnegativity(rng));
    out.push_back(check_energy_locality(rng));
    out.push_back(check_energy_translation(rng));
    out.push_back(check_energy_truncation(rng));
    out.push_back(check_energy_axis_symmetry(rng));
    out.push_back(check_interpolation_bound(rng));
    out.push_back(check_rescaling_identity(rng));
    out.push_back(check_recovery_pair(rng));
    out.push_back(check_dense_oracle(rng));
    out.push_back(check_monotone_traces(rng));
    out.push_back(check_half_step_optimality(rng));
    out.push_back(check_max_principle(rng));
    out.push_back(check_datum_bound(rng));
    out.push_back(check_channel_validity(rng));
    out.push_back(check_profile_constants(rng));
    out.push_back(check_cell_t_convergence(rng));
    out.push_back(check_local_search(rng));
    out.push_back(check_pgm_roundtrip(rng));
    return out;
}

}  // namespace latvar

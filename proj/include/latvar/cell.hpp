// Surface-density machinery: strong lattice paths and channels, the
// channel-constrained cell problem on the rotated cube, the closed-form
// one-dimensional profile constants with their tridiagonal oracle, inverse-T
// extrapolation, and the regime bound report.
#pragma once

#include "latvar/grid.hpp"
#include "latvar/solver.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace latvar {

using LatticePoint = Eigen::Vector2i;

// Ordered list of integer lattice points; consecutive points must be at
// Euclidean distance exactly 1. Revisiting a point is permitted.
struct LatticePath {
    std::vector<LatticePoint> points;
};

namespace detail {

inline std::int64_t pack_point(const LatticePoint& p) {
    return (static_cast<std::int64_t>(p[0]) << 32) ^ (static_cast<std::int64_t>(p[1]) & 0xffffffffLL);
}

}  // namespace detail

inline bool is_lattice_path(const std::vector<LatticePoint>& pts) {
    if (pts.empty()) return false;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const int dx = std::abs(pts[k + 1][0] - pts[k][0]);
        const int dy = std::abs(pts[k + 1][1] - pts[k][1]);
        if (dx + dy != 1) return false;
    }
    return true;
}

// A path is strong when every interior point has at least one horizontal AND
// at least one vertical lattice neighbor somewhere in the path. Endpoints are
// exempt; a single point is vacuously strong.
inline bool is_strong_path(const std::vector<LatticePoint>& pts) {
    if (!is_lattice_path(pts)) return false;
    std::set<std::int64_t> members;
    for (const auto& p : pts) members.insert(detail::pack_point(p));
    for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
        const LatticePoint& p = pts[k];
        const bool horiz = members.count(detail::pack_point(LatticePoint(p[0] - 1, p[1]))) ||
                           members.count(detail::pack_point(LatticePoint(p[0] + 1, p[1])));
        const bool vert = members.count(detail::pack_point(LatticePoint(p[0], p[1] - 1))) ||
                          members.count(detail::pack_point(LatticePoint(p[0], p[1] + 1)));
        if (!horiz || !vert) return false;
    }
    return true;
}

// Two paths are disjoint when they share no lattice edge (unordered
// consecutive pair); sharing isolated vertices is allowed.
inline bool are_disjoint(const LatticePath& a, const LatticePath& b) {
    const auto edges = [](const LatticePath& p) {
        std::set<std::pair<std::int64_t, std::int64_t>> e;
        for (std::size_t k = 0; k + 1 < p.points.size(); ++k) {
            std::int64_t u = detail::pack_point(p.points[k]);
            std::int64_t v = detail::pack_point(p.points[k + 1]);
            if (u > v) std::swap(u, v);
            e.emplace(u, v);
        }
        return e;
    };
    const auto ea = edges(a);
    for (const auto& e : edges(b))
        if (ea.count(e)) return false;
    return true;
}

enum class ChannelPolicy { FlatStaircase, Given, LocalSearch };

// One surface-density cell problem: cube of side T (lattice units) with face
// normal nu, parameter ell, and the channel policy. boundary_band is the
// width (in lattice layers) of the v = 1 collar inside the cube boundary.
struct CellSpec {
    Real T = 64;
    Eigen::Vector2d nu = Eigen::Vector2d(0, 1);
    Real ell = 1.0;
    ChannelPolicy policy = ChannelPolicy::FlatStaircase;
    int search_budget = 0;                 // number of candidate solves for LocalSearch
    int boundary_band = 1;
    std::optional<LatticePath> channel;    // required for policy Given
    Real linear_tol = 1e-12;

    void validate() const {
        if (!(T >= 4)) throw std::invalid_argument("cell: T must be >= 4");
        if (!(ell > 0)) throw std::invalid_argument("cell: ell must be > 0");
        if (!(nu.norm() > 0)) throw std::invalid_argument("cell: nu must be nonzero");
        if (boundary_band < 1) throw std::invalid_argument("cell: boundary_band must be >= 1");
        if (policy == ChannelPolicy::Given && !channel)
            throw std::invalid_argument("cell: policy Given requires a channel");
        if (policy == ChannelPolicy::LocalSearch && search_budget < 1)
            throw std::invalid_argument("cell: LocalSearch requires a positive search budget");
    }
};

inline Eigen::Vector2d angle_to_nu(Real angle_deg) {
    const Real rad = angle_deg * M_PI / 180.0;
    return Eigen::Vector2d(std::cos(rad), std::sin(rad));
}

namespace detail {

// Geometry of the rotated open cube on the integer lattice: s is the
// coordinate along nu, q along the in-plane perpendicular.
struct CubeFrame {
    Eigen::Vector2d nu;    // unit normal
    Eigen::Vector2d perp;  // (nu_y, -nu_x)
    Real T;

    Real s(Real x, Real y) const { return x * nu[0] + y * nu[1]; }
    Real q(Real x, Real y) const { return x * perp[0] + y * perp[1]; }
    bool inside(Real x, Real y) const { return std::abs(s(x, y)) < T / 2 && std::abs(q(x, y)) < T / 2; }
    bool inside(const LatticePoint& p) const { return inside(p[0], p[1]); }
};

inline CubeFrame cube_frame(const CellSpec& spec) {
    const Eigen::Vector2d n = spec.nu.normalized();
    return CubeFrame{n, Eigen::Vector2d(n[1], -n[0]), spec.T};
}

// Channel endpoint admissibility: the endpoint must have a lattice neighbor
// beyond the lateral face of the cube (left: q <= -T/2, right: q >= T/2).
inline bool touches_lateral_face(const CubeFrame& f, const LatticePoint& p, int side) {
    static const std::array<LatticePoint, 4> steps = {LatticePoint(1, 0), LatticePoint(-1, 0),
                                                      LatticePoint(0, 1), LatticePoint(0, -1)};
    for (const auto& st : steps) {
        const Real q = f.q(p[0] + st[0], p[1] + st[1]);
        if (side < 0 && q <= -f.T / 2 + 1e-9) return true;
        if (side > 0 && q >= f.T / 2 - 1e-9) return true;
    }
    return false;
}

inline void validate_channel(const std::vector<LatticePoint>& pts, const CubeFrame& f) {
    if (!is_strong_path(pts)) throw std::invalid_argument("cell: channel is not a strong path");
    for (const auto& p : pts)
        if (!f.inside(p)) throw std::invalid_argument("cell: channel leaves the cube");
    if (!touches_lateral_face(f, pts.front(), -1) || !touches_lateral_face(f, pts.back(), +1))
        throw std::invalid_argument("cell: channel endpoints do not reach the lateral faces");
}

// Local repair of one path end so the endpoint gains a neighbor beyond the
// lateral face: try the path as built, a one-step duplicate backtrack, or
// trimming the final point, keeping the strong-path property throughout.
inline void repair_channel_end(std::vector<LatticePoint>& pts, const CubeFrame& f, int side) {
    const auto end_ok = [&](const std::vector<LatticePoint>& c) {
        return is_strong_path(c) &&
               touches_lateral_face(f, side > 0 ? c.back() : c.front(), side);
    };
    if (end_ok(pts)) return;
    std::vector<LatticePoint> work = pts;
    if (side < 0) std::reverse(work.begin(), work.end());
    std::vector<std::vector<LatticePoint>> cands;
    if (work.size() >= 2) {
        auto dup = work;
        dup.push_back(dup[dup.size() - 2]);
        cands.push_back(std::move(dup));
        auto trim = work;
        trim.pop_back();
        cands.push_back(trim);
        if (trim.size() >= 2) {
            trim.push_back(trim[trim.size() - 2]);
            cands.push_back(std::move(trim));
        }
    }
    for (auto& c : cands) {
        if (side < 0) std::reverse(c.begin(), c.end());
        if (end_ok(c)) {
            pts = std::move(c);
            return;
        }
    }
}

}  // namespace detail

// Default channel: the two-layer ladder of lattice points straddling the
// hyperplane through the origin with normal nu, traversed serpentine from
// one lateral face to the other. For coordinate directions this is the
// doubled row/column of interface sites; for oblique directions a staircase.
// The occasional one-step revisit keeps the traversal connected when the
// interface line crosses a cell corner; the result is always validated as a
// strong path with admissible endpoints.
inline LatticePath flat_channel(const CellSpec& spec) {
    spec.validate();
    const detail::CubeFrame frame = detail::cube_frame(spec);

    // Dominant axis (ties prefer axis 2), oriented positive.
    Eigen::Vector2d nu = frame.nu;
    const int d = std::abs(nu[1]) >= std::abs(nu[0]) - 1e-12 ? 1 : 0;  // 0-based axis index
    const int o = 1 - d;
    if (nu[d] < 0) nu = -nu;
    Real ratio = nu[o] / nu[d];  // |ratio| <= 1
    if (std::abs(ratio - std::llround(ratio)) < 1e-9) ratio = static_cast<Real>(std::llround(ratio));

    const auto make_point = [&](int height, int col) {
        LatticePoint p;
        p[d] = height;
        p[o] = col;
        return p;
    };
    // Height of the lower ladder element in column t: the integer k with
    // <(k, t), nu> <= 0 < <(k+1, t), nu>.
    const auto k_minus = [&](int t) {
        Real h = -static_cast<Real>(t) * ratio;
        if (std::abs(h - std::llround(h)) < 1e-9 * std::max<Real>(1, std::abs(h)))
            h = static_cast<Real>(std::llround(h));
        return static_cast<int>(std::floor(h));
    };
    const auto column_points = [&](int t) {
        std::vector<int> hs;
        const int k = k_minus(t);
        if (frame.inside(make_point(k, t))) hs.push_back(k);
        if (frame.inside(make_point(k + 1, t))) hs.push_back(k + 1);
        return hs;
    };

    // The ladder's lateral coordinate is strictly monotone in the column
    // index, so the in-cube columns form one contiguous block around 0.
    const int t_span = static_cast<int>(std::ceil(spec.T)) + 2;
    if (column_points(0).empty()) throw std::invalid_argument("cell: T too small to host a channel");
    int t_lo = 0, t_hi = 0;
    while (t_lo > -t_span && !column_points(t_lo - 1).empty()) --t_lo;
    while (t_hi < t_span && !column_points(t_hi + 1).empty()) ++t_hi;

    const auto build = [&](int lo, int hi) {
        std::vector<LatticePoint> pts;
        int exit_h = 0;
        for (int t = lo; t <= hi; ++t) {
            const std::vector<int> hs = column_points(t);
            if (hs.empty()) throw std::logic_error("cell: ladder column unexpectedly empty");
            const std::vector<int> next = t < hi ? column_points(t + 1) : std::vector<int>{};
            const auto in_next = [&](int h) { return std::find(next.begin(), next.end(), h) != next.end(); };
            if (t == lo) {
                // Order the first column so its exit matches the next column.
                std::vector<int> order = hs;
                if (order.size() == 2 && !next.empty() && !in_next(order.back()) && in_next(order.front()))
                    std::swap(order[0], order[1]);
                for (int h : order) pts.push_back(make_point(h, t));
                exit_h = order.back();
            } else {
                if (std::find(hs.begin(), hs.end(), exit_h) == hs.end())
                    throw std::logic_error("cell: ladder traversal disconnected");
                pts.push_back(make_point(exit_h, t));
                if (hs.size() == 2) {
                    const int other = hs[0] == exit_h ? hs[1] : hs[0];
                    pts.push_back(make_point(other, t));
                    exit_h = other;
                    if (t < hi && !in_next(exit_h)) {
                        // Revisit the entry point so the step to the next column
                        // stays on the lattice.
                        const int entry = other == hs[0] ? hs[1] : hs[0];
                        pts.push_back(make_point(entry, t));
                        exit_h = entry;
                    }
                }
            }
        }

        // Orient so the path runs from the left lateral face (q <= -T/2) to the
        // right one, then repair the endpoints if the clipped extreme columns
        // left them one step short of the faces.
        if (frame.q(pts.front()[0], pts.front()[1]) > frame.q(pts.back()[0], pts.back()[1]))
            std::reverse(pts.begin(), pts.end());
        detail::repair_channel_end(pts, frame, +1);
        detail::repair_channel_end(pts, frame, -1);
        detail::validate_channel(pts, frame);
        return pts;
    };

    // A clipped extreme column with a single rung can rob the neighboring
    // full column's outer rung of its vertical neighbor while that rung sits
    // at an interior path position. Dropping the offending extreme turns the
    // uncovered rung into a path endpoint, which is exempt. Prefer the
    // maximal column range, then shrink single-rung ends one at a time.
    const bool lo_single = column_points(t_lo).size() == 1;
    const bool hi_single = column_points(t_hi).size() == 1;
    std::vector<std::pair<int, int>> ranges = {{t_lo, t_hi}};
    if (hi_single) ranges.push_back({t_lo, t_hi - 1});
    if (lo_single) ranges.push_back({t_lo + 1, t_hi});
    if (lo_single && hi_single) ranges.push_back({t_lo + 1, t_hi - 1});
    std::string err = "cell: no admissible channel";
    for (const auto& [lo, hi] : ranges) {
        if (lo > hi) continue;
        try {
            return LatticePath{build(lo, hi)};
        } catch (const std::exception& e) {
            err = e.what();
        }
    }
    throw std::invalid_argument(err);
}

// Cell objective on the integer lattice (delta = 1):
//   (1/2T) [ ell * sum_i (v^i - 1)^2 + (1/ell) * sum_{unordered bonds} (v^i - v^j)^2 ].
inline Real cell_energy(const ScalarField& v, Real ell, Real T) {
    if (!(ell > 0) || !(T > 0)) throw std::invalid_argument("cell_energy: ell and T must be > 0");
    const Grid& g = *v.grid;
    detail::KahanSum acc;
    for (int s = 0; s < g.num_sites(); ++s) {
        const Real w = v.values[s] - 1.0;
        acc.add(ell * w * w);
        for (int a = 0; a < g.n; ++a) {
            const int nb = g.neighbor(s, a, +1);
            if (nb < 0) continue;
            const Real diff = v.values[s] - v.values[nb];
            acc.add(diff * diff / ell);
        }
    }
    return acc.value() / (2 * T);
}

struct CellResult {
    GridPtr grid;
    ScalarField v;
    Real phi = 0.0;
    LatticePath channel;
};

namespace detail {

inline int site_of_lattice_point(const Grid& g, const LatticePoint& p) {
    std::array<int, 2> box{};
    for (int a = 0; a < 2; ++a) {
        const Real idx = (static_cast<Real>(p[a]) - g.origin[static_cast<std::size_t>(a)]) / g.delta;
        const int k = static_cast<int>(std::llround(idx));
        if (std::abs(idx - k) > 1e-9) return -1;
        if (k < 0 || k >= g.shape[static_cast<std::size_t>(a)]) return -1;
        box[static_cast<std::size_t>(a)] = k;
    }
    return g.site_of_box[static_cast<std::size_t>(g.box_index(box[0], box[1]))];
}

// Solve the channel-constrained quadratic: v = 0 on the channel, v = 1 on
// the collar, free-site stationarity (ell + deg/ell) v_i - (1/ell) sum v_j = ell.
inline CellResult solve_cell_with_channel(const CellSpec& spec, const GridPtr& grid,
                                          const LatticePath& channel) {
    const Grid& g = *grid;
    std::vector<int> pin(static_cast<std::size_t>(g.num_sites()), -1);  // -1 free, else 0/1 value

    // v = 1 collar: peel boundary_band layers off the cube.
    SubRegion region = SubRegion::all(g);
    for (int layer = 0; layer < spec.boundary_band; ++layer) {
        const auto split = split_interior_boundary(g, region);
        for (int s : split.boundary) pin[static_cast<std::size_t>(s)] = 1;
        SubRegion inner;
        inner.in.assign(static_cast<std::size_t>(g.num_sites()), 0);
        for (int s : split.interior) inner.in[static_cast<std::size_t>(s)] = 1;
        region = std::move(inner);
    }
    // Channel pins win over the collar.
    for (const auto& p : channel.points) {
        const int s = site_of_lattice_point(g, p);
        if (s < 0) throw std::invalid_argument("cell: channel point outside the grid");
        pin[static_cast<std::size_t>(s)] = 0;
    }

    std::vector<int> idx(static_cast<std::size_t>(g.num_sites()), -1);
    int m = 0;
    for (int s = 0; s < g.num_sites(); ++s)
        if (pin[static_cast<std::size_t>(s)] < 0) idx[static_cast<std::size_t>(s)] = m++;

    detail::SpdSystem sys;
    sys.m = m;
    sys.diag.assign(static_cast<std::size_t>(m), 0.0);
    sys.rhs = Vec::Zero(m);
    for (int s = 0; s < g.num_sites(); ++s) {
        const int r = idx[static_cast<std::size_t>(s)];
        if (r < 0) continue;
        Real deg = 0.0;
        for (int a = 0; a < g.n; ++a)
            for (int d = -1; d <= 1; d += 2) {
                const int nb = g.neighbor(s, a, d);
                if (nb < 0) continue;
                deg += 1.0;
                const int rn = idx[static_cast<std::size_t>(nb)];
                if (rn >= 0)
                    sys.off.emplace_back(r, rn, -1.0 / spec.ell);
                else
                    sys.rhs[r] += static_cast<Real>(pin[static_cast<std::size_t>(nb)]) / spec.ell;
            }
        sys.diag[static_cast<std::size_t>(r)] = spec.ell + deg / spec.ell;
        sys.rhs[r] += spec.ell;
    }

    Vec v(g.num_sites());
    const Vec x = m > 0 ? sys.solve(spec.linear_tol) : Vec();
    for (int s = 0; s < g.num_sites(); ++s) {
        const int r = idx[static_cast<std::size_t>(s)];
        v[s] = r >= 0 ? x[r] : static_cast<Real>(pin[static_cast<std::size_t>(s)]);
        if (v[s] < -1e-9 || v[s] > 1.0 + 1e-9)
            throw std::runtime_error("cell: maximum principle violated beyond round-off");
        v[s] = std::clamp(v[s], 0.0, 1.0);
    }
    ScalarField vf = make_vfield(grid, std::move(v));
    const Real phi = cell_energy(vf, spec.ell, spec.T);
    return CellResult{grid, std::move(vf), phi, channel};
}

}  // namespace detail

// Channel-constrained cell problem on the rotated open cube of side T. The
// returned value is exact for the channel used and an upper bound for the
// infimum over all channels; policy LocalSearch greedily explores single-site
// deformations that preserve channel validity and never returns a worse value
// than its starting channel.
inline CellResult solve_cell(const CellSpec& spec) {
    spec.validate();
    const detail::CubeFrame frame = detail::cube_frame(spec);
    const Real r = spec.T / std::sqrt(2.0) + 2.0;
    const GridPtr grid = build_grid(2, {-r, -r}, {r, r}, 1.0,
                                    [&](Real x, Real y) { return frame.inside(x, y); });

    LatticePath channel;
    if (spec.policy == ChannelPolicy::Given) {
        channel = *spec.channel;
        detail::validate_channel(channel.points, frame);
    } else {
        channel = flat_channel(spec);
    }

    CellResult best = detail::solve_cell_with_channel(spec, grid, channel);
    if (spec.policy != ChannelPolicy::LocalSearch) return best;

    int budget = spec.search_budget;
    static const std::array<LatticePoint, 4> steps = {LatticePoint(1, 0), LatticePoint(-1, 0),
                                                      LatticePoint(0, 1), LatticePoint(0, -1)};
    bool improved = true;
    while (improved && budget > 0) {
        improved = false;
        for (std::size_t k = 1; k + 1 < best.channel.points.size() && budget > 0; ++k) {
            for (const auto& st : steps) {
                if (budget == 0) break;
                std::vector<LatticePoint> cand = best.channel.points;
                cand[k] += st;
                if (!is_strong_path(cand)) continue;
                bool ok = true;
                for (const auto& p : cand)
                    if (!frame.inside(p)) {
                        ok = false;
                        break;
                    }
                if (!ok || !detail::touches_lateral_face(frame, cand.front(), -1) ||
                    !detail::touches_lateral_face(frame, cand.back(), +1))
                    continue;
                --budget;
                const CellResult trial =
                    detail::solve_cell_with_channel(spec, grid, LatticePath{std::move(cand)});
                if (trial.phi < best.phi - 1e-12) {
                    best = trial;
                    improved = true;
                }
            }
        }
    }
    return best;
}

// Closed form of the one-dimensional profile constant:
//   c_{ell,n} = ell/n + (4n + (sqrt(ell^2+4n)+ell)^2)
//               / (ell (sqrt(ell^2+4n)+ell)^2 + 4n sqrt(ell^2+4n) + 4n ell).
inline Real c_ell_closed_form(Real ell, int n) {
    if (!(ell > 0)) throw std::invalid_argument("c_ell_closed_form: ell must be > 0");
    if (n < 1) throw std::invalid_argument("c_ell_closed_form: n must be >= 1");
    const Real nn = static_cast<Real>(n);
    const Real s = std::sqrt(ell * ell + 4 * nn);
    const Real b = (s + ell) * (s + ell);
    return ell / nn + (4 * nn + b) / (ell * b + 4 * nn * s + 4 * nn * ell);
}

// Decay root of the profile recursion: the root in (0,1) of
// r^2 - (2 + ell^2/n) r + 1 = 0; the optimal profile is v^i = 1 - r^i.
inline Real c_ell_root(Real ell, int n) {
    if (!(ell > 0)) throw std::invalid_argument("c_ell_root: ell must be > 0");
    if (n < 1) throw std::invalid_argument("c_ell_root: n must be >= 1");
    const Real nn = static_cast<Real>(n);
    return 1.0 + (ell / (2 * nn)) * (ell - std::sqrt(ell * ell + 4 * nn));
}

struct ProfileResult {
    Real value = 0.0;
    Vec profile;  // v^0 .. v^N with v^0 = 0, v^N = 1
};

// Independent oracle for the closed form: solve the truncated stationarity
// system (ell/n)(v^i - 1) + (1/ell)(2 v^i - v^{i+1} - v^{i-1}) = 0 for
// i = 1..N-1 with v^0 = 0, v^N = 1 by the Thomas algorithm, then evaluate
//   sum_{i=0..N} (ell/n)(v^i - 1)^2 + sum_{i=0..N-1} (1/ell)(v^{i+1} - v^i)^2.
inline ProfileResult c_ell_numeric(Real ell, int n, int N) {
    if (!(ell > 0)) throw std::invalid_argument("c_ell_numeric: ell must be > 0");
    if (n < 1) throw std::invalid_argument("c_ell_numeric: n must be >= 1");
    if (N < 8) throw std::invalid_argument("c_ell_numeric: N must be >= 8");
    const Real nn = static_cast<Real>(n);
    const int m = N - 1;  // unknowns v^1..v^{N-1}
    const Real diag = ell / nn + 2.0 / ell;
    const Real off = -1.0 / ell;
    std::vector<Real> c(static_cast<std::size_t>(m), 0.0);  // modified upper diagonal
    std::vector<Real> d(static_cast<std::size_t>(m), 0.0);  // modified rhs
    for (int i = 0; i < m; ++i) {
        Real rhs = ell / nn;
        if (i == m - 1) rhs += 1.0 / ell;  // v^N = 1
        if (i == 0) {
            c[0] = off / diag;
            d[0] = rhs / diag;
        } else {
            const Real denom = diag - off * c[static_cast<std::size_t>(i - 1)];
            c[static_cast<std::size_t>(i)] = off / denom;
            d[static_cast<std::size_t>(i)] =
                (rhs - off * d[static_cast<std::size_t>(i - 1)]) / denom;
        }
    }
    Vec v = Vec::Zero(N + 1);
    v[N] = 1.0;
    for (int i = m - 1; i >= 0; --i)
        v[i + 1] = d[static_cast<std::size_t>(i)] -
                   c[static_cast<std::size_t>(i)] * (i == m - 1 ? 0.0 : v[i + 2]);

    detail::KahanSum acc;
    for (int i = 0; i <= N; ++i) {
        const Real w = v[i] - 1.0;
        acc.add(ell / nn * w * w);
    }
    for (int i = 0; i < N; ++i) {
        const Real diff = v[i + 1] - v[i];
        acc.add(diff * diff / ell);
    }
    return ProfileResult{acc.value(), std::move(v)};
}

// Least-squares fit phi(T) = phi_inf + a/T; returns phi_inf.
inline Real extrapolate_inverse_T(const std::vector<Real>& Ts, const std::vector<Real>& phis) {
    if (Ts.size() != phis.size() || Ts.size() < 2)
        throw std::invalid_argument("extrapolate_inverse_T: need >= 2 samples");
    Eigen::MatrixXd A(static_cast<int>(Ts.size()), 2);
    Eigen::VectorXd b(static_cast<int>(Ts.size()));
    for (int i = 0; i < static_cast<int>(Ts.size()); ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = 1.0 / Ts[static_cast<std::size_t>(i)];
        b(i) = phis[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector2d coef = (A.transpose() * A).ldlt().solve(A.transpose() * b);
    return coef[0];
}

struct RegimeRow {
    Real ell = 0.0;
    Real angle_deg = 0.0;
    Eigen::Vector2d nu;
    Real T = 0.0;
    Real phi = 0.0;
    bool lower_ok = false;       // phi >= max(ell/2, (T - sqrt(2))/T)
    bool upper_applicable = false;  // coordinate or diagonal direction
    bool upper_ok = true;        // phi/ell <= |nu|_inf (1 + 2/ell^2)(1 + 5/T)
};

struct RegimeReport {
    std::vector<RegimeRow> rows;
    bool all_ok = true;
};

// Evaluates the cell problem on the (ell, angle) grid and checks the scaling
// bounds: the universal lower bounds for every direction, the upper bound
// for coordinate and diagonal directions (where the default channel is
// asymptotically optimal).
inline RegimeReport regime_report(const std::vector<Real>& ells, const std::vector<Real>& angles_deg,
                                  Real T) {
    if (!(T >= 16)) throw std::invalid_argument("regime_report: T must be >= 16");
    RegimeReport rep;
    for (Real ell : ells)
        for (Real angle : angles_deg) {
            CellSpec spec;
            spec.T = T;
            spec.ell = ell;
            spec.nu = angle_to_nu(angle);
            const CellResult res = solve_cell(spec);
            RegimeRow row;
            row.ell = ell;
            row.angle_deg = angle;
            row.nu = spec.nu;
            row.T = T;
            row.phi = res.phi;
            row.lower_ok = res.phi >= ell / 2 - 1e-12 && res.phi >= (T - std::sqrt(2.0)) / T - 1e-12;
            const Real mod90 = std::fmod(std::fmod(angle, 90.0) + 90.0, 90.0);
            const bool coordinate = mod90 < 1e-9 || mod90 > 90.0 - 1e-9;
            const bool diagonal = std::abs(mod90 - 45.0) < 1e-9;
            row.upper_applicable = coordinate || diagonal;
            if (row.upper_applicable) {
                const Real nu_inf = std::max(std::abs(spec.nu[0]), std::abs(spec.nu[1]));
                row.upper_ok =
                    res.phi / ell <= nu_inf * (1 + 2 / (ell * ell)) * (1 + 5 / T) + 1e-12;
            }
            rep.all_ok = rep.all_ok && row.lower_ok && row.upper_ok;
            rep.rows.push_back(row);
        }
    return rep;
}

}  // namespace latvar

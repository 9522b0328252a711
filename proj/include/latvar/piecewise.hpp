// One-dimensional piecewise representations: the affine interpolant of a 1D
// lattice field, and an explicit piecewise-affine-with-jumps function used by
// the continuum diagnostics.
#pragma once

#include "latvar/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace latvar {

// Continuous piecewise-affine interpolant of nodal values: exact at the
// nodes, affine on each cell [x_i, x_{i+1}].
struct Interp1D {
    std::vector<Real> x;   // strictly increasing nodes
    std::vector<Real> y;   // nodal values

    int cells() const { return static_cast<int>(x.size()) - 1; }
    Real slope(int cell) const { return (y[cell + 1] - y[cell]) / (x[cell + 1] - x[cell]); }

    Real operator()(Real t) const {
        if (t <= x.front()) return y.front();
        if (t >= x.back()) return y.back();
        const auto it = std::upper_bound(x.begin(), x.end(), t);
        const int c = static_cast<int>(it - x.begin()) - 1;
        return y[c] + slope(c) * (t - x[c]);
    }
};

// Affine interpolant of a 1D field. Requires at least two sites and a gap-free
// mask (interpolation across missing sites is undefined).
inline Interp1D affine_interpolate_1d(const ScalarField& f) {
    const Grid& g = *f.grid;
    if (g.n != 1) throw std::invalid_argument("affine_interpolate_1d: requires a 1D field");
    if (g.num_sites() < 2) throw std::invalid_argument("affine_interpolate_1d: needs at least 2 sites");
    Interp1D out;
    out.x.reserve(static_cast<std::size_t>(g.num_sites()));
    out.y.reserve(static_cast<std::size_t>(g.num_sites()));
    int prev_box = -2;
    for (int s = 0; s < g.num_sites(); ++s) {
        const int b = g.box_of_site[s];
        if (prev_box >= 0 && b != prev_box + 1)
            throw std::invalid_argument("affine_interpolate_1d: masked gap in the site run");
        prev_box = b;
        out.x.push_back(g.origin[0] + g.delta * b);
        out.y.push_back(f.values[s]);
    }
    return out;
}

// A 1D function that is affine between breakpoints and may jump at interior
// breakpoints: piece k covers [x_k, x_{k+1}) with left value y_k and given
// slope. Used to express closed-form segmentations for diagnostics.
struct PiecewiseFn1D {
    struct Piece {
        Real x0, x1;   // half-open interval [x0, x1)
        Real y0;       // value at x0
        Real slope;
    };
    std::vector<Piece> pieces;

    void validate() const {
        if (pieces.empty()) throw std::invalid_argument("piecewise: no pieces");
        for (std::size_t k = 0; k < pieces.size(); ++k) {
            if (!(pieces[k].x1 > pieces[k].x0)) throw std::invalid_argument("piecewise: empty piece");
            if (k > 0 && pieces[k].x0 != pieces[k - 1].x1)
                throw std::invalid_argument("piecewise: pieces must tile an interval");
        }
    }

    // Jump points: interior breakpoints where the left limit differs from the
    // right value.
    int jump_count() const {
        int jumps = 0;
        for (std::size_t k = 1; k < pieces.size(); ++k) {
            const Piece& a = pieces[k - 1];
            const Real left = a.y0 + a.slope * (a.x1 - a.x0);
            if (left != pieces[k].y0) ++jumps;
        }
        return jumps;
    }
};

}  // namespace latvar

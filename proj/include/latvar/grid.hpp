// Lattice grids on delta*Z^n (n = 1 or 2), scalar fields on their sites, and
// the basic site-set utilities (neighbor queries, interior/boundary splits,
// slices, truncation) that the energies, solvers and cell problems build on.
#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

namespace latvar {

using Real = double;
using Vec = Eigen::VectorXd;

// A finite portion of the scaled integer lattice delta*Z^n inside an
// axis-aligned bounding box, with an optional membership mask for
// non-rectangular domains. Sites sit exactly at
//   origin + delta * (integer multi-index),
// are stored row-major (x fastest), and are immutable once built.
struct Grid {
    int n = 1;                          // dimension, 1 or 2
    Real delta = 1.0;                   // mesh size, > 0
    std::array<int, 2> shape{1, 1};     // sites per axis; shape[1] == 1 when n == 1
    std::array<Real, 2> origin{0, 0};   // coordinate of multi-index (0,0)
    std::vector<std::uint8_t> mask;     // bounding-box membership, one flag per multi-index

    // Derived index maps (built by finalize()).
    std::vector<int> site_of_box;       // box index -> member-site index, or -1
    std::vector<int> box_of_site;       // member-site index -> box index

    int num_box() const { return shape[0] * shape[1]; }
    int num_sites() const { return static_cast<int>(box_of_site.size()); }

    int box_index(int ix, int iy) const { return iy * shape[0] + ix; }
    std::array<int, 2> box_coords(int b) const { return {b % shape[0], b / shape[0]}; }

    // Coordinate of a member site.
    std::array<Real, 2> coords(int site) const {
        const auto c = box_coords(box_of_site[site]);
        return {origin[0] + delta * c[0], origin[1] + delta * c[1]};
    }

    // Member-site index of the lattice neighbor site +/- delta*e_axis
    // (axis 0-based), or -1 when the neighbor is absent or masked out.
    int neighbor(int site, int axis, int dir) const {
        auto c = box_coords(box_of_site[site]);
        c[axis] += dir;
        if (c[0] < 0 || c[0] >= shape[0] || c[1] < 0 || c[1] >= shape[1]) return -1;
        return site_of_box[box_index(c[0], c[1])];
    }

    // Rebuilds the box<->site index maps from the mask. Called by builders.
    void finalize() {
        if (delta <= 0) throw std::invalid_argument("grid: delta must be > 0");
        if (n != 1 && n != 2) throw std::invalid_argument("grid: n must be 1 or 2");
        if (shape[0] < 1 || shape[1] < 1) throw std::invalid_argument("grid: shape components must be >= 1");
        if (n == 1 && shape[1] != 1) throw std::invalid_argument("grid: 1D grids need shape[1] == 1");
        if (mask.empty()) mask.assign(static_cast<std::size_t>(num_box()), 1);
        if (static_cast<int>(mask.size()) != num_box())
            throw std::invalid_argument("grid: mask size does not match bounding box");
        site_of_box.assign(mask.size(), -1);
        box_of_site.clear();
        for (int b = 0; b < num_box(); ++b) {
            if (mask[b]) {
                site_of_box[b] = static_cast<int>(box_of_site.size());
                box_of_site.push_back(b);
            }
        }
        if (box_of_site.empty()) throw std::invalid_argument("grid: no member sites (empty grid)");
    }
};

using GridPtr = std::shared_ptr<const Grid>;

// Builds the grid of lattice sites strictly inside the open box
// (lo[0],hi[0]) x (lo[1],hi[1]) (second axis ignored for n == 1), optionally
// masked by a coordinate predicate. The lattice is anchored at zero: sites
// are exact integer multiples of delta.
inline GridPtr build_grid(int n, std::array<Real, 2> lo, std::array<Real, 2> hi, Real delta,
                          const std::function<bool(Real, Real)>& inside = nullptr) {
    if (delta <= 0) throw std::invalid_argument("build_grid: delta must be > 0");
    if (n != 1 && n != 2) throw std::invalid_argument("build_grid: n must be 1 or 2");
    Grid g;
    g.n = n;
    g.delta = delta;
    std::array<int, 2> klo{0, 0};
    for (int a = 0; a < n; ++a) {
        if (hi[a] <= lo[a]) throw std::invalid_argument("build_grid: box side must have positive length");
        // Smallest k with k*delta > lo, largest k with k*delta < hi (strict).
        int k0 = static_cast<int>(std::floor(lo[a] / delta)) + 1;
        while (static_cast<Real>(k0) * delta <= lo[a]) ++k0;
        while (static_cast<Real>(k0 - 1) * delta > lo[a]) --k0;
        int k1 = static_cast<int>(std::ceil(hi[a] / delta)) - 1;
        while (static_cast<Real>(k1) * delta >= hi[a]) --k1;
        while (static_cast<Real>(k1 + 1) * delta < hi[a]) ++k1;
        if (k1 < k0) throw std::invalid_argument("build_grid: no lattice sites inside the box");
        klo[a] = k0;
        g.shape[a] = k1 - k0 + 1;
        g.origin[a] = static_cast<Real>(k0) * delta;
    }
    if (inside) {
        g.mask.assign(static_cast<std::size_t>(g.num_box()), 0);
        for (int iy = 0; iy < g.shape[1]; ++iy)
            for (int ix = 0; ix < g.shape[0]; ++ix) {
                const Real x = g.origin[0] + delta * ix;
                const Real y = n == 2 ? g.origin[1] + delta * iy : 0.0;
                g.mask[g.box_index(ix, iy)] = inside(x, y) ? 1 : 0;
            }
    }
    g.finalize();
    return std::make_shared<Grid>(std::move(g));
}

// Builds a full rectangular grid directly from a shape (used for images and
// cell cubes, where the site set is given rather than cut out of a box).
inline GridPtr build_grid_from_shape(int n, std::array<int, 2> shape, Real delta,
                                     std::array<Real, 2> origin = {0, 0},
                                     std::vector<std::uint8_t> mask = {}) {
    Grid g;
    g.n = n;
    g.delta = delta;
    g.shape = shape;
    g.origin = origin;
    g.mask = std::move(mask);
    g.finalize();
    return std::make_shared<Grid>(std::move(g));
}

enum class FieldKind { U, V };

// Real values on the member sites of a grid. Kind V promises values in [0,1]
// (validated on construction; solver steps re-assert it). Fields are value
// objects: mutation means building a new field.
struct ScalarField {
    GridPtr grid;
    FieldKind kind = FieldKind::U;
    Vec values;

    int size() const { return static_cast<int>(values.size()); }
};

inline ScalarField make_ufield(GridPtr grid, Vec values) {
    if (!grid) throw std::invalid_argument("field: null grid");
    if (values.size() != grid->num_sites()) throw std::invalid_argument("field: value count != member sites");
    return ScalarField{std::move(grid), FieldKind::U, std::move(values)};
}

inline ScalarField make_ufield_constant(GridPtr grid, Real c) {
    Vec v = Vec::Constant(grid->num_sites(), c);
    return make_ufield(std::move(grid), std::move(v));
}

inline ScalarField make_vfield(GridPtr grid, Vec values) {
    if (!grid) throw std::invalid_argument("field: null grid");
    if (values.size() != grid->num_sites()) throw std::invalid_argument("field: value count != member sites");
    if ((values.array() < 0.0).any() || (values.array() > 1.0).any())
        throw std::invalid_argument("field: V-kind values must lie in [0,1]");
    return ScalarField{std::move(grid), FieldKind::V, std::move(values)};
}

inline ScalarField make_vfield_constant(GridPtr grid, Real c) {
    Vec v = Vec::Constant(grid->num_sites(), c);
    return make_vfield(std::move(grid), std::move(v));
}

// A subset of a grid's member sites, one flag per member site.
struct SubRegion {
    std::vector<std::uint8_t> in;

    static SubRegion all(const Grid& g) {
        SubRegion r;
        r.in.assign(static_cast<std::size_t>(g.num_sites()), 1);
        return r;
    }
    static SubRegion of(const Grid& g, const std::function<bool(Real, Real)>& pred) {
        SubRegion r;
        r.in.assign(static_cast<std::size_t>(g.num_sites()), 0);
        for (int s = 0; s < g.num_sites(); ++s) {
            const auto c = g.coords(s);
            r.in[s] = pred(c[0], c[1]) ? 1 : 0;
        }
        return r;
    }
    bool contains(int site) const { return in[static_cast<std::size_t>(site)] != 0; }
    int count() const {
        int c = 0;
        for (auto f : in) c += f;
        return c;
    }
};

struct InteriorBoundarySplit {
    std::vector<int> interior;
    std::vector<int> boundary;
};

// Splits the sites of a region into interior sites (all 2n lattice neighbors
// are again member sites of the region) and boundary sites (the rest). The
// two lists partition the region.
inline InteriorBoundarySplit split_interior_boundary(const Grid& g, const SubRegion& region) {
    if (static_cast<int>(region.in.size()) != g.num_sites())
        throw std::invalid_argument("split_interior_boundary: region does not match grid");
    InteriorBoundarySplit out;
    for (int s = 0; s < g.num_sites(); ++s) {
        if (!region.contains(s)) continue;
        bool interior = true;
        for (int a = 0; a < g.n && interior; ++a)
            for (int d = -1; d <= 1 && interior; d += 2) {
                const int nb = g.neighbor(s, a, d);
                if (nb < 0 || !region.contains(nb)) interior = false;
            }
        (interior ? out.interior : out.boundary).push_back(s);
    }
    return out;
}

// Restriction of a 2D field along the line through lattice row/column
// `offset` in direction e_axis (axis is 1-based: 1 = e_1, 2 = e_2). Returns a
// 1D field with the same delta; the offset indexes the transversal box
// coordinate. Throws when the requested line holds no member sites.
inline ScalarField slice(const ScalarField& f, int axis, int offset) {
    const Grid& g = *f.grid;
    if (g.n != 2) throw std::invalid_argument("slice: requires a 2D field");
    if (axis < 1 || axis > g.n) throw std::invalid_argument("slice: axis out of range");
    const int along = axis - 1;       // varying box coordinate
    const int trans = 1 - along;      // fixed box coordinate
    if (offset < 0 || offset >= g.shape[trans]) throw std::invalid_argument("slice: offset out of range");

    std::vector<std::uint8_t> mask1;
    std::vector<Real> vals;
    for (int i = 0; i < g.shape[along]; ++i) {
        std::array<int, 2> c{};
        c[along] = i;
        c[trans] = offset;
        const int site = g.site_of_box[g.box_index(c[0], c[1])];
        mask1.push_back(site >= 0 ? 1 : 0);
        if (site >= 0) vals.push_back(f.values[site]);
    }
    Grid g1;
    g1.n = 1;
    g1.delta = g.delta;
    g1.shape = {g.shape[along], 1};
    g1.origin = {g.origin[along], 0.0};
    g1.mask = std::move(mask1);
    g1.finalize();  // throws when the slice is empty
    Vec v(static_cast<Eigen::Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) v[static_cast<Eigen::Index>(i)] = vals[i];
    return ScalarField{std::make_shared<Grid>(std::move(g1)), f.kind, std::move(v)};
}

// Truncation at level m >= 0: clamps every value to [-m, m].
inline ScalarField truncate(const ScalarField& f, Real m) {
    if (m < 0) throw std::invalid_argument("truncate: level must be >= 0");
    ScalarField out = f;
    out.values = f.values.array().min(m).max(-m);
    return out;
}

}  // namespace latvar

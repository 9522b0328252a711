// Minimal PGM (P2 ASCII / P5 binary, 8-bit) reader and P5 writer, plus the
// conversions between images and lattice fields. Kept deliberately small:
// this is the only binary file format the toolkit touches.
#pragma once

#include "latvar/grid.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace latvar {

struct PgmError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Malformed magic/width/height or syntax errors in the header.
struct PgmHeaderError : PgmError {
    using PgmError::PgmError;
};
// Maxval outside [1, 255] (16-bit images are unsupported) or a sample above it.
struct PgmMaxvalError : PgmError {
    using PgmError::PgmError;
};
// Payload ends before width*height samples are read.
struct PgmTruncatedError : PgmError {
    using PgmError::PgmError;
};

struct PgmImage {
    int width = 0;
    int height = 0;
    int maxval = 255;
    std::vector<std::uint8_t> pixels;  // row-major, row 0 = top

    std::uint8_t at(int row, int col) const {
        return pixels[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(col)];
    }
};

namespace detail {

// Skip whitespace and '#' comments; return false at end of stream.
inline bool skip_pgm_separators(std::istream& in) {
    for (;;) {
        const int c = in.peek();
        if (c == EOF) return false;
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        return true;
    }
}

inline bool read_pgm_int(std::istream& in, long& out) {
    if (!skip_pgm_separators(in)) return false;
    if (!(in >> out)) return false;
    return true;
}

}  // namespace detail

inline PgmImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PgmHeaderError("pgm: cannot open '" + path + "'");
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (!in || m0 != 'P' || (m1 != '2' && m1 != '5'))
        throw PgmHeaderError("pgm: '" + path + "' is not a P2/P5 file");
    const bool binary = m1 == '5';

    long w = 0, h = 0, maxval = 0;
    if (!detail::read_pgm_int(in, w) || !detail::read_pgm_int(in, h))
        throw PgmHeaderError("pgm: malformed width/height in '" + path + "'");
    if (w < 1 || h < 1) throw PgmHeaderError("pgm: nonpositive dimensions in '" + path + "'");
    if (!detail::read_pgm_int(in, maxval))
        throw PgmHeaderError("pgm: malformed maxval in '" + path + "'");
    if (maxval < 1 || maxval > 255)
        throw PgmMaxvalError("pgm: maxval " + std::to_string(maxval) + " unsupported in '" + path +
                             "' (must be in [1,255])");

    PgmImage img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.maxval = static_cast<int>(maxval);
    const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    img.pixels.resize(count);
    if (binary) {
        in.get();  // single whitespace byte after maxval
        in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(count));
        if (static_cast<std::size_t>(in.gcount()) != count)
            throw PgmTruncatedError("pgm: truncated payload in '" + path + "'");
        for (std::uint8_t p : img.pixels)
            if (p > maxval)
                throw PgmMaxvalError("pgm: sample exceeds maxval in '" + path + "'");
    } else {
        for (std::size_t k = 0; k < count; ++k) {
            long val = 0;
            if (!detail::read_pgm_int(in, val))
                throw PgmTruncatedError("pgm: truncated payload in '" + path + "'");
            if (val < 0 || val > maxval)
                throw PgmMaxvalError("pgm: sample exceeds maxval in '" + path + "'");
            img.pixels[k] = static_cast<std::uint8_t>(val);
        }
    }
    return img;
}

inline void write_pgm(const std::string& path, const PgmImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PgmError("pgm: cannot write '" + path + "'");
    out << "P5\n" << img.width << " " << img.height << "\n" << img.maxval << "\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw PgmError("pgm: write failed for '" + path + "'");
}

// Image -> field: pixel (row, col) maps to the site with box index
// (col, row); values are scaled to [0,1] by maxval; delta = 1/max(w,h).
inline ScalarField ingest_pgm_image(const PgmImage& img) {
    const Real delta = 1.0 / static_cast<Real>(std::max(img.width, img.height));
    const GridPtr grid = build_grid_from_shape(2, {img.width, img.height}, delta, {0.0, 0.0}, {});
    Vec vals(grid->num_sites());
    for (int row = 0; row < img.height; ++row)
        for (int col = 0; col < img.width; ++col) {
            const int site = grid->site_of_box[static_cast<std::size_t>(grid->box_index(col, row))];
            vals[site] = static_cast<Real>(img.at(row, col)) / static_cast<Real>(img.maxval);
        }
    return make_ufield(grid, std::move(vals));
}

inline ScalarField ingest_pgm(const std::string& path) { return ingest_pgm_image(read_pgm(path)); }

// Field -> image with an affine rescale of [lo, hi] onto [0, 255]; callers
// record (lo, hi) so the mapping is invertible. Requires a full rectangular
// 2D grid.
inline PgmImage render_field(const ScalarField& f, Real lo, Real hi) {
    const Grid& g = *f.grid;
    if (g.n != 2) throw std::invalid_argument("render_field: requires a 2D grid");
    if (g.num_sites() != g.num_box())
        throw std::invalid_argument("render_field: requires a full rectangular grid");
    PgmImage img;
    img.width = g.shape[0];
    img.height = g.shape[1];
    img.maxval = 255;
    img.pixels.resize(static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height));
    const Real span = hi > lo ? hi - lo : 1.0;
    for (int row = 0; row < img.height; ++row)
        for (int col = 0; col < img.width; ++col) {
            const int site = g.site_of_box[static_cast<std::size_t>(g.box_index(col, row))];
            Real t = (f.values[site] - lo) / span * 255.0;
            t = std::min(std::max(t, 0.0), 255.0);
            img.pixels[static_cast<std::size_t>(row) * static_cast<std::size_t>(img.width) +
                       static_cast<std::size_t>(col)] = static_cast<std::uint8_t>(std::lround(t));
        }
    return img;
}

}  // namespace latvar

#pragma once

#include <filesystem>
#include <vector>

#include "vortexbell/interferometer.hpp"
#include "vortexbell/modes.hpp"

// Deterministic file exports: 16-bit PGM images and round-tripping CSV
// grids. No timestamps, locales, or platform-dependent formatting, so a
// rerun with the same inputs writes byte-identical files.

namespace vortexbell::io {

// Binary PGM (P5, maxval 65535, big-endian samples). The values vector is
// row-major with the y index slow, like FieldGrid; image rows are written
// top-down with +Y at the top. [lo, hi] maps linearly onto [0, 65535] with
// clamping; requires hi > lo and finite values.
void write_pgm16(const modes::GridSpec& grid, const std::vector<double>& values, double lo,
                 double hi, const std::filesystem::path& path);

// Frame view scaled to the frame maximum; an all-zero frame stays zero.
void write_pgm16(const interferometer::CCDFrame& frame, const std::filesystem::path& path);

// CSV with header X,Y,value and one row per pixel (x fast, y slow),
// printed with enough digits to round-trip exactly.
void write_grid_csv(const modes::GridSpec& grid, const std::vector<double>& values,
                    const std::filesystem::path& path);

}  // namespace vortexbell::io

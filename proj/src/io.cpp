#include "vortexbell/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace vortexbell::io {
namespace {

std::ofstream open_binary(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    return out;
}

}  // namespace

void write_pgm16(const modes::GridSpec& grid, const std::vector<double>& values, double lo,
                 double hi, const std::filesystem::path& path) {
    std::size_t n = static_cast<std::size_t>(grid.samples_per_axis());
    if (values.size() != n * n) {
        throw std::invalid_argument("write_pgm16: value count does not match the grid");
    }
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
        throw std::invalid_argument("write_pgm16: scale range must be finite with hi > lo");
    }
    std::ofstream out = open_binary(path);
    out << "P5\n" << n << " " << n << "\n65535\n";
    double scale = 65535.0 / (hi - lo);
    std::vector<unsigned char> row(2 * n);
    for (std::size_t iy = n; iy-- > 0;) {  // +Y at the top of the image
        for (std::size_t ix = 0; ix < n; ++ix) {
            double v = (values[iy * n + ix] - lo) * scale;
            double clamped = std::clamp(v, 0.0, 65535.0);
            auto sample = static_cast<std::uint16_t>(std::lround(clamped));
            row[2 * ix] = static_cast<unsigned char>(sample >> 8);  // big-endian
            row[2 * ix + 1] = static_cast<unsigned char>(sample & 0xFF);
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    if (!out) {
        throw std::runtime_error("write_pgm16: failed writing " + path.string());
    }
}

void write_pgm16(const interferometer::CCDFrame& frame, const std::filesystem::path& path) {
    double peak = 0.0;
    for (double v : frame.intensity()) {
        peak = std::max(peak, v);
    }
    if (peak <= 0.0) {
        peak = 1.0;  // all-zero frame maps to all-zero samples
    }
    write_pgm16(frame.grid(), frame.intensity(), 0.0, peak, path);
}

void write_grid_csv(const modes::GridSpec& grid, const std::vector<double>& values,
                    const std::filesystem::path& path) {
    std::size_t n = static_cast<std::size_t>(grid.samples_per_axis());
    if (values.size() != n * n) {
        throw std::invalid_argument("write_grid_csv: value count does not match the grid");
    }
    std::ofstream out = open_binary(path);
    out << "X,Y,value\n";
    char line[128];
    for (std::size_t iy = 0; iy < n; ++iy) {
        for (std::size_t ix = 0; ix < n; ++ix) {
            std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n",
                          grid.coordinate(static_cast<int>(ix)),
                          grid.coordinate(static_cast<int>(iy)), values[iy * n + ix]);
            out << line;
        }
    }
    if (!out) {
        throw std::runtime_error("write_grid_csv: failed writing " + path.string());
    }
}

}  // namespace vortexbell::io

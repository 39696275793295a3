#include "vortexbell/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "vortexbell/errors.hpp"

namespace vortexbell::interferometer {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Fraction of input power allowed to fall outside the resampled window.
constexpr double kClipTolerance = 1e-6;

std::uint64_t splitmix_finalize(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stream key for (seed, trial, setting): sequential avalanche mixing, so
// every triple gets an effectively independent engine and adding trials
// never reshuffles earlier ones.
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t trial, std::uint64_t setting) {
    std::uint64_t k = splitmix_finalize(seed);
    k = splitmix_finalize(k ^ (trial + 0x9E3779B97F4A7C15ULL));
    k = splitmix_finalize(k ^ (setting + 0xBF58476D1CE4E5B9ULL));
    return k;
}

// Standard normals from a dedicated engine. Box-Muller over the engine's
// raw 53-bit uniforms rather than std::normal_distribution, whose output
// sequence is not portable across standard libraries.
class NoiseStream {
  public:
    NoiseStream(std::uint64_t seed, std::uint64_t trial, std::uint64_t setting)
        : engine_(stream_key(seed, trial, setting)) {}

    double gaussian() {
        double u1 = 1.0 - uniform();  // in (0, 1]: keeps the log finite
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

  private:
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine_;
};

void require_roi_inside(const modes::GridSpec& grid, const RegionOfInterest& roi) {
    double margin = grid.half_extent();
    if (std::abs(roi.center_x()) + roi.radius() > margin ||
        std::abs(roi.center_y()) + roi.radius() > margin) {
        throw std::invalid_argument("integrate_roi: disc extends outside the grid window");
    }
}

// Throws if more than kClipTolerance of the power sits outside the window
// the displaced output resamples, i.e. outside [-L,L]^2 shifted by (x0,y0).
void require_unclipped(const modes::FieldGrid& field, double x0, double y0) {
    const modes::GridSpec& grid = field.grid();
    int n = grid.samples_per_axis();
    double extent = grid.half_extent();
    double total = 0.0;
    double lost = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        double y = grid.coordinate(iy);
        bool y_inside = y >= y0 - extent && y <= y0 + extent;
        for (int ix = 0; ix < n; ++ix) {
            double x = grid.coordinate(ix);
            double power = std::norm(field.at(ix, iy));
            total += power;
            if (!y_inside || x < -extent + x0 || x > extent + x0) {
                lost += power;
            }
        }
    }
    if (total > 0.0 && lost > kClipTolerance * total) {
        throw DisplacementTooLargeError(
            "displace: shift (" + std::to_string(x0) + ", " + std::to_string(y0) +
            ") clips a power fraction of " + std::to_string(lost / total));
    }
}

double quantile(const std::vector<double>& sorted, double p) {
    std::size_t n = sorted.size();
    double h = p * static_cast<double>(n - 1);
    std::size_t lo = static_cast<std::size_t>(h);
    std::size_t hi = std::min(lo + 1, n - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// One setting's noiseless chain, reused across trials.
struct ChainReading {
    CCDFrame bright;
    double input_power;       // power of the displaced field
    double bright_roi_power;  // disc integral of the bright port
};

ChainReading run_chain(const modes::FieldGrid& field, const wigner::PhaseSpacePoint& pt,
                       const RegionOfInterest& roi) {
    modes::FieldGrid displaced = displace(field, pt);
    double input_power = displaced.total_power();
    auto ports = interfere(displaced, invert(displaced));
    double roi_power = integrate_roi(ports.first, roi);
    return ChainReading{std::move(ports.first), input_power, roi_power};
}

double noiseless_parity(const ChainReading& chain) {
    if (!(chain.input_power > 0.0)) {
        throw NormalizationFailureError("measure_parity: displaced beam carries no power");
    }
    return 2.0 * chain.bright_roi_power / chain.input_power - 1.0;
}

// One jittered reading of a prepared chain. Draw order: output jitter,
// input jitter, then camera noise over disc pixels row-major (y slow).
double read_parity(const ChainReading& chain, const RegionOfInterest& roi,
                   const NoiseModel& noise, NoiseStream& stream) {
    double g_out = 1.0 + noise.intensity_jitter_rel() * stream.gaussian();
    double g_in = 1.0 + noise.intensity_jitter_rel() * stream.gaussian();
    double i_in = g_in * chain.input_power;
    if (!(i_in > 0.0)) {
        throw NormalizationFailureError("measure_parity: non-positive input reading");
    }
    double i_out;
    if (noise.ccd_noise_abs() > 0.0) {
        const modes::GridSpec& grid = chain.bright.grid();
        int n = grid.samples_per_axis();
        double sum = 0.0;
        for (int iy = 0; iy < n; ++iy) {
            double y = grid.coordinate(iy);
            for (int ix = 0; ix < n; ++ix) {
                if (!roi.contains(grid.coordinate(ix), y)) {
                    continue;
                }
                double v = g_out * chain.bright.at(ix, iy) +
                           noise.ccd_noise_abs() * stream.gaussian();
                sum += std::max(0.0, v);  // camera clamp
            }
        }
        i_out = sum * grid.pixel_area();
    } else {
        // No per-pixel term: the jittered disc integral in closed form.
        i_out = std::max(0.0, g_out) * chain.bright_roi_power;
    }
    return 2.0 * i_out / i_in - 1.0;
}

}  // namespace

CCDFrame::CCDFrame(const modes::GridSpec& grid, std::vector<double> intensity)
    : grid_(grid), intensity_(std::move(intensity)) {
    std::size_t n = static_cast<std::size_t>(grid.samples_per_axis());
    if (intensity_.size() != n * n) {
        throw std::invalid_argument("CCDFrame: intensity size does not match the grid");
    }
    for (double v : intensity_) {
        if (!(v >= 0.0)) {
            throw std::invalid_argument("CCDFrame: intensities must be non-negative");
        }
    }
}

double CCDFrame::at(int ix, int iy) const {
    int n = grid_.samples_per_axis();
    if (ix < 0 || ix >= n || iy < 0 || iy >= n) {
        throw IndexOutOfRangeError("CCDFrame: pixel index out of range");
    }
    return intensity_[static_cast<std::size_t>(iy) * static_cast<std::size_t>(n) +
                      static_cast<std::size_t>(ix)];
}

double CCDFrame::total_power() const {
    double sum = std::accumulate(intensity_.begin(), intensity_.end(), 0.0);
    return sum * grid_.pixel_area();
}

RegionOfInterest::RegionOfInterest(double center_x, double center_y, double radius)
    : center_x_(center_x), center_y_(center_y), radius_(radius) {
    if (!std::isfinite(center_x) || !std::isfinite(center_y) || !std::isfinite(radius) ||
        radius <= 0.0) {
        throw std::invalid_argument("RegionOfInterest: center must be finite, radius positive");
    }
}

bool RegionOfInterest::contains(double X, double Y) const {
    double dx = X - center_x_;
    double dy = Y - center_y_;
    return dx * dx + dy * dy <= radius_ * radius_;
}

RegionOfInterest RegionOfInterest::default_for(const modes::GridSpec& grid) {
    double extent = grid.half_extent();
    return RegionOfInterest(0.0, 0.0, std::max(extent - 0.5, 0.75 * extent));
}

NoiseModel::NoiseModel(double intensity_jitter_rel, double ccd_noise_abs, std::uint64_t seed)
    : intensity_jitter_rel_(intensity_jitter_rel), ccd_noise_abs_(ccd_noise_abs), seed_(seed) {
    if (!std::isfinite(intensity_jitter_rel) || intensity_jitter_rel < 0.0 ||
        intensity_jitter_rel >= 0.5) {
        throw std::invalid_argument("NoiseModel: intensity jitter must lie in [0, 0.5)");
    }
    if (!std::isfinite(ccd_noise_abs) || ccd_noise_abs < 0.0) {
        throw std::invalid_argument("NoiseModel: camera noise must be finite and >= 0");
    }
}

NoiseModel NoiseModel::reference(std::uint64_t seed, double peak_intensity) {
    if (!std::isfinite(peak_intensity) || peak_intensity < 0.0) {
        throw std::invalid_argument("NoiseModel: peak intensity must be finite and >= 0");
    }
    return NoiseModel(0.01, 1e-5 * peak_intensity, seed);
}

modes::FieldGrid displace(const modes::FieldGrid& field, const wigner::PhaseSpacePoint& pt) {
    double x0 = pt.X();
    double px0 = pt.PX();
    double y0 = pt.Y();
    double py0 = pt.PY();
    if (x0 == 0.0 && px0 == 0.0 && y0 == 0.0 && py0 == 0.0) {
        return field;  // exact identity
    }

    const modes::GridSpec& grid = field.grid();
    int n = grid.samples_per_axis();
    double extent = grid.half_extent();
    double step = grid.step();
    if (x0 != 0.0 || y0 != 0.0) {
        require_unclipped(field, x0, y0);
    }

    // Separable phase exp(-i(px0*(X - x0/2) + py0*(Y - y0/2))); the constant
    // half-shift part keeps the map a true adjoint displacement but drops
    // out of every |field|^2.
    std::vector<complexd> column_phase(static_cast<std::size_t>(n));
    std::vector<complexd> row_phase(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        column_phase[static_cast<std::size_t>(i)] =
            std::exp(complexd(0.0, -px0 * (grid.coordinate(i) - 0.5 * x0)));
        row_phase[static_cast<std::size_t>(i)] =
            std::exp(complexd(0.0, -py0 * (grid.coordinate(i) - 0.5 * y0)));
    }

    auto sample = [&](double sx, double sy) -> complexd {
        double fx = (sx + extent) / step;
        double fy = (sy + extent) / step;
        double top = static_cast<double>(n - 1);
        if (fx < 0.0 || fy < 0.0 || fx > top || fy > top) {
            return complexd(0.0, 0.0);
        }
        int ix = std::min(static_cast<int>(fx), n - 2);
        int iy = std::min(static_cast<int>(fy), n - 2);
        double tx = fx - ix;
        double ty = fy - iy;
        return (1.0 - tx) * (1.0 - ty) * field.at(ix, iy) +
               tx * (1.0 - ty) * field.at(ix + 1, iy) +
               (1.0 - tx) * ty * field.at(ix, iy + 1) + tx * ty * field.at(ix + 1, iy + 1);
    };

    std::vector<complexd> out(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    bool pure_phase = x0 == 0.0 && y0 == 0.0;
    for (int iy = 0; iy < n; ++iy) {
        double y = grid.coordinate(iy);
        for (int ix = 0; ix < n; ++ix) {
            complexd value = pure_phase ? field.at(ix, iy)
                                        : sample(grid.coordinate(ix) + x0, y + y0);
            out[static_cast<std::size_t>(iy) * static_cast<std::size_t>(n) +
                static_cast<std::size_t>(ix)] =
                column_phase[static_cast<std::size_t>(ix)] *
                row_phase[static_cast<std::size_t>(iy)] * value;
        }
    }
    return modes::FieldGrid(grid, std::move(out));
}

modes::FieldGrid invert(const modes::FieldGrid& field) {
    const modes::GridSpec& grid = field.grid();
    int n = grid.samples_per_axis();
    std::vector<complexd> out(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            out[static_cast<std::size_t>(iy) * static_cast<std::size_t>(n) +
                static_cast<std::size_t>(ix)] = field.at(n - 1 - ix, n - 1 - iy);
        }
    }
    return modes::FieldGrid(grid, std::move(out));
}

std::pair<CCDFrame, CCDFrame> interfere(const modes::FieldGrid& a, const modes::FieldGrid& b) {
    if (!(a.grid() == b.grid())) {
        throw GridMismatchError("interfere: fields live on different grids");
    }
    std::size_t count = a.values().size();
    std::vector<double> bright(count);
    std::vector<double> dark(count);
    for (std::size_t i = 0; i < count; ++i) {
        bright[i] = 0.25 * std::norm(a.values()[i] + b.values()[i]);
        dark[i] = 0.25 * std::norm(a.values()[i] - b.values()[i]);
    }
    return {CCDFrame(a.grid(), std::move(bright)), CCDFrame(a.grid(), std::move(dark))};
}

double integrate_roi(const CCDFrame& frame, const RegionOfInterest& roi) {
    const modes::GridSpec& grid = frame.grid();
    require_roi_inside(grid, roi);
    int n = grid.samples_per_axis();
    double sum = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        double y = grid.coordinate(iy);
        for (int ix = 0; ix < n; ++ix) {
            if (roi.contains(grid.coordinate(ix), y)) {
                sum += frame.at(ix, iy);
            }
        }
    }
    return sum * grid.pixel_area();
}

double measure_parity(const modes::BeamSpec& beam, const wigner::PhaseSpacePoint& pt,
                      const modes::GridSpec& grid, const RegionOfInterest& roi,
                      const std::optional<NoiseModel>& noise) {
    ChainReading chain = run_chain(modes::sample_grid(beam, grid), pt, roi);
    if (!noise) {
        return noiseless_parity(chain);
    }
    if (!(chain.input_power > 0.0)) {
        throw NormalizationFailureError("measure_parity: displaced beam carries no power");
    }
    NoiseStream stream(noise->seed(), 0, 0);
    return read_parity(chain, roi, *noise, stream);
}

BellExperimentReport run_bell_experiment(const modes::BeamSpec& beam,
                                         const bell::BellSettings& settings, int trials,
                                         const modes::GridSpec& grid, const RegionOfInterest& roi,
                                         const NoiseModel& noise) {
    if (trials < 1) {
        throw std::invalid_argument("run_bell_experiment: trials must be >= 1");
    }
    modes::FieldGrid field = modes::sample_grid(beam, grid);
    auto joint = [](const bell::SettingPair& a, const bell::SettingPair& b) {
        return wigner::PhaseSpacePoint(a.x, a.p, b.x, b.p);
    };
    std::array<wigner::PhaseSpacePoint, 4> points = {
        joint(settings.alpha(), settings.beta()),
        joint(settings.alpha(), settings.beta_prime()),
        joint(settings.alpha_prime(), settings.beta()),
        joint(settings.alpha_prime(), settings.beta_prime()),
    };
    std::vector<ChainReading> chains;
    chains.reserve(points.size());
    for (const auto& point : points) {
        chains.push_back(run_chain(field, point, roi));
        if (!(chains.back().input_power > 0.0)) {
            throw NormalizationFailureError("run_bell_experiment: a setting lost all power");
        }
    }

    BellExperimentReport report{settings, {}, {}, 0.0, 0.0, 0.0, 0.0, 0.0, noise.seed()};
    for (auto& samples : report.parity_samples) {
        samples.reserve(static_cast<std::size_t>(trials));
    }
    report.bell_samples.reserve(static_cast<std::size_t>(trials));
    for (int trial = 0; trial < trials; ++trial) {
        double bell_sum = 0.0;
        for (std::size_t s = 0; s < chains.size(); ++s) {
            NoiseStream stream(noise.seed(), static_cast<std::uint64_t>(trial),
                               static_cast<std::uint64_t>(s));
            double parity = read_parity(chains[s], roi, noise, stream);
            report.parity_samples[s].push_back(parity);
            bell_sum += s == 3 ? -parity : parity;
        }
        report.bell_samples.push_back(bell_sum);
    }

    std::vector<double> sorted = report.bell_samples;
    std::sort(sorted.begin(), sorted.end());
    report.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) /
                  static_cast<double>(sorted.size());
    report.min = sorted.front();
    report.max = sorted.back();
    report.q25 = quantile(sorted, 0.25);
    report.q75 = quantile(sorted, 0.75);
    return report;
}

}  // namespace vortexbell::interferometer

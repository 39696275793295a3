#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "vortexbell/bell.hpp"
#include "vortexbell/modes.hpp"
#include "vortexbell/wigner.hpp"

// Simulated displaced-parity measurement chain. A programmable phase mask
// applies the adjoint displacement D^+(pt) to the beam, a common-path loop
// interferes the displaced field with its point-inverted copy, and a camera
// integrates the bright port over a region of interest. The normalized
// bright-port power then estimates the displaced parity:
//
//     parity = 2 * I_out / I_in - 1  ->  pi^2 W(pt),
//
// which is the same quantity bell_kernel computes analytically. Detection
// noise (per-shot source jitter, per-pixel additive camera noise) is modeled
// by seeded, reproducible random streams.

namespace vortexbell::interferometer {

using modes::complexd;

// Camera frame: non-negative intensity samples on a GridSpec, row-major
// with the y index slow, like FieldGrid. Negative inputs are rejected;
// noisy frames are clamped at zero before construction.
class CCDFrame {
  public:
    CCDFrame(const modes::GridSpec& grid, std::vector<double> intensity);

    const modes::GridSpec& grid() const { return grid_; }
    const std::vector<double>& intensity() const { return intensity_; }

    double at(int ix, int iy) const;

    // Riemann sum of the intensity times the pixel area.
    double total_power() const;

  private:
    modes::GridSpec grid_;
    std::vector<double> intensity_;
};

// Disc over which a frame is integrated. The disc must lie inside the grid
// window of any frame it is applied to; that containment is checked at use.
class RegionOfInterest {
  public:
    RegionOfInterest(double center_x, double center_y, double radius);

    double center_x() const { return center_x_; }
    double center_y() const { return center_y_; }
    double radius() const { return radius_; }

    bool contains(double X, double Y) const;

    // Origin-centered disc leaving a half-unit guard band inside the window
    // (never less than three quarters of the half-extent). On the default
    // 12 x 12 window this gives radius 5.5, which keeps the truncated tail
    // of every supported displaced mode below the chain error budget.
    static RegionOfInterest default_for(const modes::GridSpec& grid);

  private:
    double center_x_;
    double center_y_;
    double radius_;
};

// Detection noise parameters. Each intensity reading is scaled by an
// independent per-shot factor 1 + intensity_jitter_rel * N(0,1); camera
// pixels additionally receive ccd_noise_abs * N(0,1) counts and are clamped
// at zero. The jitter must stay below 0.5 so readings remain sign-definite
// in all but vanishing-probability tails.
class NoiseModel {
  public:
    NoiseModel(double intensity_jitter_rel, double ccd_noise_abs, std::uint64_t seed);

    double intensity_jitter_rel() const { return intensity_jitter_rel_; }
    double ccd_noise_abs() const { return ccd_noise_abs_; }
    std::uint64_t seed() const { return seed_; }

    static NoiseModel off() { return NoiseModel(0.0, 0.0, 0); }

    // Reference noise level: 1% source jitter plus additive camera noise of
    // 1e-5 times the given peak intensity.
    static NoiseModel reference(std::uint64_t seed, double peak_intensity);

  private:
    double intensity_jitter_rel_;
    double ccd_noise_abs_;
    std::uint64_t seed_;
};

// Statistics of a repeated four-setting run. Setting order is
// (alpha,beta), (alpha,beta'), (alpha',beta), (alpha',beta'); each trial's
// Bell sum combines the four parities with the + + + - pattern. Quartiles
// use linear interpolation between order statistics, so
// min <= q25 <= q75 <= max always holds.
struct BellExperimentReport {
    bell::BellSettings settings;
    std::array<std::vector<double>, 4> parity_samples;
    std::vector<double> bell_samples;
    double mean;
    double q25;
    double q75;
    double min;
    double max;
    std::uint64_t seed;
};

// Adjoint displacement D^+(pt): output(X, Y) is the input sampled at
// (X + X0, Y + Y0) by bilinear interpolation, times the phase
// exp(-i(PX0*(X - X0/2) + PY0*(Y - Y0/2))) whose constant half-shift part
// cancels in every detected intensity. Source points outside the window
// read as zero; if more than 1e-6 of the input power falls outside the
// resampled window the beam is considered clipped and
// DisplacementTooLargeError is thrown.
modes::FieldGrid displace(const modes::FieldGrid& field, const wigner::PhaseSpacePoint& pt);

// Point inversion output(X, Y) = input(-X, -Y): an exact index permutation
// (odd sample counts guarantee a center pixel), no interpolation.
modes::FieldGrid invert(const modes::FieldGrid& field);

// Balanced combiner: per pixel I+- = |a +- b|^2 / 4, returned as
// (bright, dark). Total detected power is (||a||^2 + ||b||^2) / 2.
// Throws GridMismatchError unless the grids are identical.
std::pair<CCDFrame, CCDFrame> interfere(const modes::FieldGrid& a, const modes::FieldGrid& b);

// Pixel-area-weighted sum of the intensities whose pixel centers lie inside
// the disc. Throws std::invalid_argument if the disc is not fully inside
// the frame's window.
double integrate_roi(const CCDFrame& frame, const RegionOfInterest& roi);

// Full chain: sample the beam, displace, interfere with the inverted copy,
// integrate the bright port over the disc (I_out), and normalize by a
// separate reading of the displaced beam's power (I_in). Returns the parity
// estimate 2*I_out/I_in - 1, which lies in [-1, 1] up to rounding when the
// noise is off. With noise, I_out and I_in receive independent jitter
// factors and camera pixels receive additive noise, drawn from the stream
// for (seed, trial 0, setting 0); throws NormalizationFailureError if the
// jittered I_in is not positive.
double measure_parity(const modes::BeamSpec& beam, const wigner::PhaseSpacePoint& pt,
                      const modes::GridSpec& grid, const RegionOfInterest& roi,
                      const std::optional<NoiseModel>& noise = std::nullopt);

// Repeated four-setting run: the noiseless chain is evaluated once per
// setting, then each (trial, setting) pair re-reads it through its own
// noise stream, so trial counts can grow without reshuffling earlier
// trials. Requires trials >= 1.
BellExperimentReport run_bell_experiment(const modes::BeamSpec& beam,
                                         const bell::BellSettings& settings, int trials,
                                         const modes::GridSpec& grid, const RegionOfInterest& roi,
                                         const NoiseModel& noise);

}  // namespace vortexbell::interferometer

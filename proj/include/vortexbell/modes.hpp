#pragma once

#include <complex>
#include <vector>

// Paraxial beam modes in dimensionless transverse coordinates.
//
// Coordinates are rescaled so that the fundamental Gaussian reads
// exp(-(X^2+Y^2)/2)/sqrt(pi): one unit of X corresponds to w/sqrt(2) of
// physical distance for a beam of waist w, and transverse momenta are
// measured in units of sqrt(2)/w. In these units every mode of order
// (m, n) is an L2-normalized product/combination of 1D oscillator
// functions and all phase-space formulas below are parameter-free.

namespace vortexbell::modes {

using complexd = std::complex<double>;

enum class ModeFamily { HG, LG };

// Transverse mode label. For the LG family the pair (m, n) encodes
// azimuthal index l = m - n and radial index p = min(m, n).
struct ModeIndex {
    ModeFamily family;
    int m;
    int n;

    ModeIndex(ModeFamily family_, int m_, int n_);

    int azimuthal() const { return m - n; }
    int radial() const { return m < n ? m : n; }

    static ModeIndex hg(int m, int n) { return ModeIndex(ModeFamily::HG, m, n); }
    static ModeIndex lg(int m, int n) { return ModeIndex(ModeFamily::LG, m, n); }
};

struct WeightedMode {
    complexd coefficient;
    ModeIndex mode;
};

// Finite mode superposition. Construction rescales the coefficient vector
// to unit L2 norm; an all-zero coefficient list is rejected.
class BeamSpec {
  public:
    explicit BeamSpec(std::vector<WeightedMode> terms);

    static BeamSpec single(const ModeIndex& mode);

    const std::vector<WeightedMode>& terms() const { return terms_; }

  private:
    std::vector<WeightedMode> terms_;
};

// Square sampling window [-L, L]^2 with an odd number of samples per axis,
// so the window contains the exact center point and index reflection
// i -> N-1-i negates coordinates bit-exactly.
class GridSpec {
  public:
    GridSpec(double half_extent, int samples_per_axis);

    double half_extent() const { return half_extent_; }
    int samples_per_axis() const { return samples_; }
    double step() const { return step_; }
    double coordinate(int i) const;
    double pixel_area() const { return step_ * step_; }

    bool operator==(const GridSpec& other) const {
        return half_extent_ == other.half_extent_ && samples_ == other.samples_;
    }

  private:
    double half_extent_;
    int samples_;
    double step_;
};

// Complex field samples on a GridSpec, row-major with the y index as the
// slow axis: value(ix, iy) = field at (coordinate(ix), coordinate(iy)).
class FieldGrid {
  public:
    FieldGrid(const GridSpec& grid, std::vector<complexd> values);

    const GridSpec& grid() const { return grid_; }
    const std::vector<complexd>& values() const { return values_; }
    std::vector<complexd>& values() { return values_; }

    const complexd& at(int ix, int iy) const;
    complexd& at(int ix, int iy);

    // Riemann sum of |E|^2 times the pixel area.
    double total_power() const;

  private:
    GridSpec grid_;
    std::vector<complexd> values_;
};

// Physicists' Hermite polynomial H_m by three-term recurrence, m <= 30.
double hermite_poly(int m, double x);

// Generalized Laguerre polynomial L_p^alpha by recurrence, p <= 30, alpha >= 0.
double laguerre_poly(int p, int alpha, double x);

// Unit-norm 1D oscillator function u_m(x) = pi^{-1/4} (2^m m!)^{-1/2} H_m(x) e^{-x^2/2}.
double hermite_gauss_1d(int m, double x);

// HG_{mn}(X, Y) = u_m(X) u_n(Y). Real-valued; returned as complex for uniformity.
complexd eval_hg(int m, int n, double X, double Y);

// LG_{mn}(X, Y) = (-1)^p sqrt(p!/(pi q!)) (X + i sgn(l) Y)^{|l|} L_p^{|l|}(R^2) e^{-R^2/2}
// with l = m - n, p = min(m, n), q = max(m, n). Unit L2 norm.
complexd eval_lg(int m, int n, double X, double Y);

complexd eval_mode(const ModeIndex& mode, double X, double Y);

complexd eval_beam(const BeamSpec& beam, double X, double Y);

FieldGrid sample_grid(const BeamSpec& beam, const GridSpec& grid);

}  // namespace vortexbell::modes

#include "vortexbell/modes.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "vortexbell/errors.hpp"

namespace vortexbell::modes {

namespace {

constexpr int kMaxOrder = 30;

void check_order(int value, const char* name) {
    if (value < 0) throw IndexOutOfRangeError(std::string(name) + " must be non-negative");
    if (value > kMaxOrder)
        throw OrderTooLargeError(std::string(name) + " exceeds supported order " +
                                 std::to_string(kMaxOrder));
}

// (X + iY)^k (or the conjugate base for negative l) by repeated
// multiplication; exact sign propagation under (X, Y) -> (-X, -Y).
complexd azimuthal_factor(int l, double X, double Y) {
    const complexd base = l >= 0 ? complexd(X, Y) : complexd(X, -Y);
    complexd out(1.0, 0.0);
    for (int k = std::abs(l); k > 0; --k) out *= base;
    return out;
}

}  // namespace

ModeIndex::ModeIndex(ModeFamily family_, int m_, int n_) : family(family_), m(m_), n(n_) {
    if (m < 0 || n < 0) throw IndexOutOfRangeError("mode indices must be non-negative");
}

BeamSpec::BeamSpec(std::vector<WeightedMode> terms) : terms_(std::move(terms)) {
    double norm2 = 0.0;
    for (const auto& t : terms_) {
        if (!std::isfinite(t.coefficient.real()) || !std::isfinite(t.coefficient.imag()))
            throw NormalizationFailureError("beam coefficient is not finite");
        norm2 += std::norm(t.coefficient);
    }
    if (terms_.empty() || norm2 <= 0.0)
        throw NormalizationFailureError("beam has no power to normalize");
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& t : terms_) t.coefficient *= scale;
}

BeamSpec BeamSpec::single(const ModeIndex& mode) {
    return BeamSpec({WeightedMode{complexd(1.0, 0.0), mode}});
}

GridSpec::GridSpec(double half_extent, int samples_per_axis)
    : half_extent_(half_extent), samples_(samples_per_axis) {
    if (!(half_extent > 0.0) || !std::isfinite(half_extent))
        throw std::invalid_argument("grid half extent must be positive and finite");
    if (samples_per_axis < 3 || samples_per_axis % 2 == 0)
        throw std::invalid_argument("grid sample count must be odd and at least 3");
    step_ = half_extent_ / ((samples_ - 1) / 2);
}

double GridSpec::coordinate(int i) const {
    if (i < 0 || i >= samples_) throw IndexOutOfRangeError("grid index out of range");
    // Centered form of -L + 2L*i/(N-1): coordinate(N-1-i) == -coordinate(i) exactly.
    return (i - (samples_ - 1) / 2) * step_;
}

FieldGrid::FieldGrid(const GridSpec& grid, std::vector<complexd> values)
    : grid_(grid), values_(std::move(values)) {
    const std::size_t n = static_cast<std::size_t>(grid_.samples_per_axis());
    if (values_.size() != n * n)
        throw GridMismatchError("field sample count does not match grid");
}

const complexd& FieldGrid::at(int ix, int iy) const {
    const int n = grid_.samples_per_axis();
    if (ix < 0 || ix >= n || iy < 0 || iy >= n)
        throw IndexOutOfRangeError("field index out of range");
    return values_[static_cast<std::size_t>(iy) * n + ix];
}

complexd& FieldGrid::at(int ix, int iy) {
    return const_cast<complexd&>(static_cast<const FieldGrid&>(*this).at(ix, iy));
}

double FieldGrid::total_power() const {
    double sum = 0.0;
    for (const auto& v : values_) sum += std::norm(v);
    return sum * grid_.pixel_area();
}

double hermite_poly(int m, double x) {
    check_order(m, "hermite order");
    double hkm1 = 0.0;
    double hk = 1.0;
    for (int k = 0; k < m; ++k) {
        const double hk1 = 2.0 * x * hk - 2.0 * k * hkm1;
        hkm1 = hk;
        hk = hk1;
    }
    return hk;
}

double laguerre_poly(int p, int alpha, double x) {
    check_order(p, "laguerre order");
    if (alpha < 0) throw IndexOutOfRangeError("laguerre alpha must be non-negative");
    double lkm1 = 0.0;
    double lk = 1.0;
    for (int k = 0; k < p; ++k) {
        const double lk1 = ((2.0 * k + 1.0 + alpha - x) * lk - (k + alpha) * lkm1) / (k + 1.0);
        lkm1 = lk;
        lk = lk1;
    }
    return lk;
}

double hermite_gauss_1d(int m, double x) {
    check_order(m, "mode order");
    double norm2 = 1.0;  // 2^m m!
    for (int k = 1; k <= m; ++k) norm2 *= 2.0 * k;
    const double amp = std::pow(std::numbers::pi, -0.25) / std::sqrt(norm2);
    return amp * hermite_poly(m, x) * std::exp(-0.5 * x * x);
}

complexd eval_hg(int m, int n, double X, double Y) {
    return complexd(hermite_gauss_1d(m, X) * hermite_gauss_1d(n, Y), 0.0);
}

complexd eval_lg(int m, int n, double X, double Y) {
    check_order(m, "mode order");
    check_order(n, "mode order");
    const int p = m < n ? m : n;
    const int q = m < n ? n : m;
    const int l = m - n;
    double ratio = 1.0;  // p!/q!
    for (int j = p + 1; j <= q; ++j) ratio /= j;
    double norm = std::sqrt(ratio / std::numbers::pi);
    if (p % 2 != 0) norm = -norm;
    const double r2 = X * X + Y * Y;
    return norm * azimuthal_factor(l, X, Y) * laguerre_poly(p, std::abs(l), r2) *
           std::exp(-0.5 * r2);
}

complexd eval_mode(const ModeIndex& mode, double X, double Y) {
    return mode.family == ModeFamily::HG ? eval_hg(mode.m, mode.n, X, Y)
                                         : eval_lg(mode.m, mode.n, X, Y);
}

complexd eval_beam(const BeamSpec& beam, double X, double Y) {
    complexd sum(0.0, 0.0);
    for (const auto& t : beam.terms()) sum += t.coefficient * eval_mode(t.mode, X, Y);
    return sum;
}

FieldGrid sample_grid(const BeamSpec& beam, const GridSpec& grid) {
    const int n = grid.samples_per_axis();
    std::vector<complexd> values(static_cast<std::size_t>(n) * n);
    for (int iy = 0; iy < n; ++iy) {
        const double Y = grid.coordinate(iy);
        for (int ix = 0; ix < n; ++ix) {
            values[static_cast<std::size_t>(iy) * n + ix] = eval_beam(beam, grid.coordinate(ix), Y);
        }
    }
    return FieldGrid(grid, std::move(values));
}

}  // namespace vortexbell::modes

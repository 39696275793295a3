#pragma once

#include "vortexbell/modes.hpp"

// Four-dimensional Wigner function of a transverse beam,
//   W(X, P_X, Y, P_Y) = (1/pi^2) int d2t exp(2i P.t) E*(r + t) E(r - t),
// normalized so that the full 4D integral is 1 for a unit-power beam.
// In the rescaled coordinates pi^2 W is the expectation value of the
// displaced parity operator and is bounded by 1 in magnitude.

namespace vortexbell::wigner {

using modes::complexd;

// Point (X, P_X, Y, P_Y). Components must be finite and at most 10 in
// magnitude, which keeps the fixed-order quadrature rules accurate.
class PhaseSpacePoint {
  public:
    PhaseSpacePoint(double X, double PX, double Y, double PY);

    double X() const { return x_; }
    double PX() const { return px_; }
    double Y() const { return y_; }
    double PY() const { return py_; }

    static PhaseSpacePoint origin() { return {0.0, 0.0, 0.0, 0.0}; }

  private:
    double x_;
    double px_;
    double y_;
    double py_;
};

// Displaced parity of a pure LG_{mn} mode, pi^2 W, in closed form:
//   (-1)^{m+n} e^{-4 Q0} L_m[4(Q0 + Q2)] L_n[4(Q0 - Q2)]
// with Q0 = (X^2 + Y^2 + P_X^2 + P_Y^2)/4 and Q2 = (X P_Y - Y P_X)/2.
// Equals exactly +-1 at the origin.
double displaced_parity_lg(int m, int n, const PhaseSpacePoint& pt);

// Closed-form Wigner function of LG_{mn}: displaced_parity_lg / pi^2.
double wigner_lg(int m, int n, const PhaseSpacePoint& pt);

// Independent closed form for the l = 1 vortex mode LG_{10}:
//   (1/pi^2) e^{-X^2-Y^2-P_X^2-P_Y^2} [(P_X - Y)^2 + (P_Y + X)^2 - 1].
double wigner_lg10_closed(const PhaseSpacePoint& pt);

// Wigner function of an arbitrary beam by Gauss-Hermite quadrature of the
// defining integral. LG terms are expanded over the HG basis and the
// integral is assembled bilinearly from separable 1D cross kernels.
// Runs at two quadrature orders (32, 64) and reports a convergence
// failure when they disagree by more than tol.
double wigner_numeric(const modes::BeamSpec& beam, const PhaseSpacePoint& pt, double tol = 1e-8);

// Position marginal int W dP_X dP_Y; equals the beam intensity |E(X, Y)|^2.
double marginal_x(const modes::BeamSpec& beam, double X, double Y, double tol = 1e-8);

// Momentum marginal int W dX dY; equals the Fourier-domain intensity.
double marginal_p(const modes::BeamSpec& beam, double PX, double PY, double tol = 1e-8);

}  // namespace vortexbell::wigner

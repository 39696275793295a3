#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "vortexbell/modes.hpp"
#include "vortexbell/wigner.hpp"

// CHSH Bell sums over displaced-parity correlations. The correlation at a
// joint setting (alpha, beta) is pi^2 W(alpha_X, alpha_P, beta_Y, beta_P):
// one side of the inequality picks a point in the (X, P_X) plane, the
// other in (Y, P_Y). A separable intensity distribution obeys |B| <= 2;
// vortex beams exceed the bound.

namespace vortexbell::bell {

// One side's measurement choice: a point of that side's phase plane.
struct SettingPair {
    double x;
    double p;
};

// The four settings (alpha, alpha', beta, beta') of a CHSH arrangement.
// Components are confined to the search box [-2, 2]; the Bell sums of
// interest decay to a constant well inside it.
class BellSettings {
  public:
    BellSettings(SettingPair alpha, SettingPair alpha_prime, SettingPair beta,
                 SettingPair beta_prime);

    // The two-parameter diagonal family: alpha = (0,0), alpha' = (X, 0),
    // beta = (0,0), beta' = (0, P_Y).
    static BellSettings diagonal(double X, double PY);

    const SettingPair& alpha() const { return alpha_; }
    const SettingPair& alpha_prime() const { return alpha_prime_; }
    const SettingPair& beta() const { return beta_; }
    const SettingPair& beta_prime() const { return beta_prime_; }

  private:
    SettingPair alpha_;
    SettingPair alpha_prime_;
    SettingPair beta_;
    SettingPair beta_prime_;
};

enum class SettingSpace { Diag2, Full8 };

struct OptimizationResult {
    BellSettings settings;
    double bell_abs;
    std::int64_t evaluations;
    bool converged;
};

// Displaced-parity correlation Pi(pt) = pi^2 W(pt), in [-1, 1] up to
// rounding. Single LG modes use the closed form; anything else goes
// through quadrature.
double bell_kernel(const modes::BeamSpec& beam, const wigner::PhaseSpacePoint& pt);

// B = Pi(alpha, beta) + Pi(alpha, beta') + Pi(alpha', beta) - Pi(alpha', beta').
double bell_sum(const modes::BeamSpec& beam, const BellSettings& settings);

// Closed-form Bell sum of the l = 1 vortex mode over the diagonal family:
//   B(X, P_Y) = e^{-P_Y^2}(P_Y^2 - 1) + e^{-X^2}(X^2 - 1)
//             - e^{-(P_Y^2+X^2)}((P_Y + X)^2 - 1) - 1.
double bell_sum_lg10_closed(double X, double PY);

// Maximizes |bell_sum| over the chosen setting family: a deterministic
// coarse scan (the full 0.1-step lattice for Diag2, a seeded uniform
// sample for Full8, where the lattice would be astronomically large)
// followed by Nelder-Mead refinement from the five best scan points.
// Counts bell_sum evaluations against the budget; when the budget runs
// out the best point seen so far is returned with converged = false.
OptimizationResult optimize_settings(const modes::BeamSpec& beam, SettingSpace space,
                                     std::int64_t budget = 200000,
                                     std::uint64_t seed = 12345);

// Optimized |B| for the vortex ladder LG_{n,0}, n = 1 .. n_max (n_max <= 6).
std::vector<std::pair<int, double>> violation_curve(int n_max, SettingSpace space);

}  // namespace vortexbell::bell

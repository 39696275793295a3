#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "vortexbell/bell.hpp"
#include "vortexbell/errors.hpp"
#include "vortexbell/modes.hpp"
#include "vortexbell/wigner.hpp"

using namespace vortexbell;
using namespace vortexbell::bell;
using modes::BeamSpec;
using modes::ModeIndex;
using wigner::PhaseSpacePoint;

namespace {

std::array<double, 8> flatten(const BellSettings& s) {
    return {s.alpha().x,      s.alpha().p,      s.alpha_prime().x, s.alpha_prime().p,
            s.beta().x,       s.beta().p,       s.beta_prime().x,  s.beta_prime().p};
}

// The Bell landscape of a vortex mode is invariant under a common rotation
// of both phase planes and under swapping the planes with momenta negated,
// so optima form orbits; compare settings up to those symmetries.
bool matches_up_to_symmetry(const BellSettings& got, const std::array<double, 8>& want,
                            double tol) {
    const auto raw = flatten(got);
    for (int swap = 0; swap < 2; ++swap) {
        std::array<double, 8> base = raw;
        if (swap == 1) {
            base = {raw[4], -raw[5], raw[6], -raw[7], raw[0], -raw[1], raw[2], -raw[3]};
        }
        for (int step = 0; step < 7200; ++step) {
            const double theta = 2.0 * std::numbers::pi * step / 7200.0;
            const double c = std::cos(theta);
            const double s = std::sin(theta);
            bool all = true;
            for (int pair = 0; pair < 4 && all; ++pair) {
                const double x = base[2 * pair];
                const double p = base[2 * pair + 1];
                all = std::abs(c * x - s * p - want[2 * pair]) <= tol &&
                      std::abs(s * x + c * p - want[2 * pair + 1]) <= tol;
            }
            if (all) return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("settings are confined to the search box") {
    CHECK_THROWS_AS(BellSettings({2.5, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(BellSettings({0.0, 0.0}, {0.0, std::nan("")}, {0.0, 0.0}, {0.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(BellSettings::diagonal(0.0, -2.1), std::invalid_argument);

    const auto diag = BellSettings::diagonal(0.45, -0.45);
    CHECK(diag.alpha().x == 0.0);
    CHECK(diag.alpha().p == 0.0);
    CHECK(diag.alpha_prime().x == 0.45);
    CHECK(diag.alpha_prime().p == 0.0);
    CHECK(diag.beta().x == 0.0);
    CHECK(diag.beta_prime().p == -0.45);
}

TEST_CASE("kernel anchors at the origin") {
    const auto origin = PhaseSpacePoint::origin();
    CHECK(bell_kernel(BeamSpec::single(ModeIndex::lg(1, 0)), origin) == -1.0);
    CHECK(bell_kernel(BeamSpec::single(ModeIndex::lg(2, 0)), origin) == 1.0);
    CHECK(bell_kernel(BeamSpec::single(ModeIndex::lg(1, 1)), origin) == 1.0);
    CHECK(bell_kernel(BeamSpec::single(ModeIndex::hg(0, 0)), origin) ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("quadrature path agrees with the analytic path") {
    // The same vortex mode written as an HG superposition loses the
    // single-LG shortcut, so this exercises the numeric route.
    const double r = 1.0 / std::sqrt(2.0);
    const BeamSpec vortex({{{r, 0.0}, ModeIndex::hg(1, 0)}, {{0.0, r}, ModeIndex::hg(0, 1)}});
    const double pts[][4] = {{0.0, 0.0, 0.0, 0.0},
                             {0.45, 0.0, 0.0, 0.45},
                             {-0.3, 0.8, 0.2, -0.6},
                             {1.2, -0.4, -1.1, 0.9}};
    for (const auto& q : pts) {
        const PhaseSpacePoint pt(q[0], q[1], q[2], q[3]);
        CHECK(bell_kernel(vortex, pt) ==
              doctest::Approx(wigner::displaced_parity_lg(1, 0, pt)).epsilon(1e-9));
        CHECK(std::abs(bell_kernel(vortex, pt)) <= 1.0 + 1e-9);
    }
}

TEST_CASE("closed-form sum anchors") {
    CHECK(bell_sum_lg10_closed(0.0, 0.0) == -2.0);
    CHECK(bell_sum_lg10_closed(0.45, 0.45) == doctest::Approx(-2.1758893457).epsilon(1e-9));
    CHECK(std::abs(bell_sum_lg10_closed(0.45, 0.45) + 2.176) < 1e-3);
    CHECK(bell_sum_lg10_closed(5.0, 5.0) == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("assembled sum equals the closed form across the diagonal family") {
    const BeamSpec vortex = BeamSpec::single(ModeIndex::lg(1, 0));
    CHECK(bell_sum(vortex, BellSettings::diagonal(0.0, 0.0)) == -2.0);
    for (int i = 0; i <= 20; ++i) {
        for (int j = 0; j <= 20; ++j) {
            const double X = -1.0 + 0.1 * i;
            const double PY = -1.0 + 0.1 * j;
            CHECK(std::abs(bell_sum(vortex, BellSettings::diagonal(X, PY)) -
                           bell_sum_lg10_closed(X, PY)) < 1e-9);
        }
    }
}

TEST_CASE("relabeled settings move the minus sign with them") {
    const BeamSpec vortex = BeamSpec::single(ModeIndex::lg(1, 0));
    const SettingPair a{0.3, -0.2};
    const SettingPair ap{-0.5, 0.1};
    const SettingPair b{0.2, 0.4};
    const SettingPair bp{-0.1, -0.3};
    const double k_ab = bell_kernel(vortex, {a.x, a.p, b.x, b.p});
    const double k_abp = bell_kernel(vortex, {a.x, a.p, bp.x, bp.p});
    const double k_apb = bell_kernel(vortex, {ap.x, ap.p, b.x, b.p});
    const double k_apbp = bell_kernel(vortex, {ap.x, ap.p, bp.x, bp.p});

    CHECK(bell_sum(vortex, BellSettings(a, ap, b, bp)) ==
          doctest::Approx(k_ab + k_abp + k_apb - k_apbp).epsilon(1e-12));
    // Swapping primed and unprimed on both sides reuses the same four
    // kernels with the minus sign following the new (alpha', beta') slot.
    CHECK(bell_sum(vortex, BellSettings(ap, a, bp, b)) ==
          doctest::Approx(k_apbp + k_apb + k_abp - k_ab).epsilon(1e-12));
}

TEST_CASE("diagonal optimizer finds the vortex optimum") {
    const BeamSpec vortex = BeamSpec::single(ModeIndex::lg(1, 0));
    const auto result = optimize_settings(vortex, SettingSpace::Diag2);
    CHECK(result.converged);
    CHECK(result.bell_abs >= 2.17);
    CHECK(result.bell_abs <= 2.18);
    CHECK(result.bell_abs ==
          doctest::Approx(std::abs(bell_sum(vortex, result.settings))).epsilon(1e-9));

    const double X = result.settings.alpha_prime().x;
    const double PY = result.settings.beta_prime().p;
    CHECK(std::abs(std::abs(X) - 0.45) < 0.01);
    CHECK(std::abs(std::abs(PY) - 0.45) < 0.01);
    CHECK(X * PY > 0.0);  // the optimum pairs equal signs

    // Never below the best lattice value.
    double lattice_best = 0.0;
    for (int i = 0; i <= 40; ++i) {
        for (int j = 0; j <= 40; ++j) {
            lattice_best = std::max(
                lattice_best, std::abs(bell_sum_lg10_closed(-2.0 + 0.1 * i, -2.0 + 0.1 * j)));
        }
    }
    CHECK(result.bell_abs >= lattice_best - 1e-12);
}

TEST_CASE("eight-parameter optimizer beats the diagonal family") {
    const BeamSpec vortex = BeamSpec::single(ModeIndex::lg(1, 0));
    const auto diag = optimize_settings(vortex, SettingSpace::Diag2);
    const auto full = optimize_settings(vortex, SettingSpace::Full8);
    CHECK(full.converged);
    CHECK(full.bell_abs >= 2.23);
    CHECK(full.bell_abs <= 2.25);
    CHECK(full.bell_abs > diag.bell_abs);
    CHECK(full.bell_abs ==
          doctest::Approx(std::abs(bell_sum(vortex, full.settings))).epsilon(1e-9));

    // A reference solution of the eight-parameter problem; any optimizer
    // output must be one of its symmetry images.
    const std::array<double, 8> reference = {-0.07, 0.05, 0.4, -0.26, -0.05, -0.07, 0.26, 0.4};
    CHECK(matches_up_to_symmetry(full.settings, reference, 0.05));

    const BellSettings reference_settings({-0.07, 0.05}, {0.4, -0.26}, {-0.05, -0.07},
                                          {0.26, 0.4});
    CHECK(std::abs(bell_sum(vortex, reference_settings)) == doctest::Approx(2.2385).epsilon(1e-3));
}

TEST_CASE("higher vortex charge violates more") {
    const auto lg20 = optimize_settings(BeamSpec::single(ModeIndex::lg(2, 0)),
                                        SettingSpace::Diag2);
    CHECK(lg20.bell_abs >= 2.23);
    CHECK(lg20.bell_abs <= 2.25);
    CHECK(std::abs(std::abs(lg20.settings.alpha_prime().x) - 0.37) < 0.01);

    const auto curve = violation_curve(6, SettingSpace::Diag2);
    REQUIRE(curve.size() == 6);
    CHECK(curve[0].first == 1);
    CHECK(std::abs(curve[0].second - 2.176) < 0.01);
    CHECK(std::abs(curve[1].second - 2.241) < 0.01);
    for (std::size_t i = 1; i < curve.size(); ++i) {
        CHECK(curve[i].second > curve[i - 1].second);
    }
    CHECK_THROWS_AS(violation_curve(0, SettingSpace::Diag2), std::invalid_argument);
    CHECK_THROWS_AS(violation_curve(7, SettingSpace::Diag2), std::invalid_argument);
}

TEST_CASE("separable ground mode stays at the classical bound") {
    const auto result = optimize_settings(BeamSpec::single(ModeIndex::hg(0, 0)),
                                          SettingSpace::Diag2, 50000);
    CHECK(result.bell_abs <= 2.0 + 1e-6);
    CHECK(result.bell_abs >= 2.0 - 1e-6);
}

TEST_CASE("optimizer is deterministic and honors its budget") {
    const BeamSpec vortex = BeamSpec::single(ModeIndex::lg(1, 0));
    const auto first = optimize_settings(vortex, SettingSpace::Full8, 100000, 2024);
    const auto second = optimize_settings(vortex, SettingSpace::Full8, 100000, 2024);
    CHECK(first.bell_abs == second.bell_abs);
    CHECK(flatten(first.settings) == flatten(second.settings));
    CHECK(first.evaluations == second.evaluations);

    // Different seeds land on symmetry-equivalent optima of equal height.
    const auto other = optimize_settings(vortex, SettingSpace::Full8, 100000, 7);
    CHECK(other.bell_abs == doctest::Approx(first.bell_abs).epsilon(1e-6));

    const auto starved = optimize_settings(vortex, SettingSpace::Diag2, 100, 1);
    CHECK_FALSE(starved.converged);
    CHECK(starved.evaluations == 100);
    CHECK(starved.bell_abs ==
          doctest::Approx(std::abs(bell_sum(vortex, starved.settings))).epsilon(1e-9));

    CHECK_THROWS_AS(optimize_settings(vortex, SettingSpace::Diag2, 0), std::invalid_argument);
}

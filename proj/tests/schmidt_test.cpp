#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "vortexbell/errors.hpp"
#include "vortexbell/modes.hpp"
#include "vortexbell/schmidt.hpp"

using namespace vortexbell;
using namespace vortexbell::schmidt;
using modes::complexd;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

double max_abs(const complexd& z) { return std::abs(z); }

}  // namespace

TEST_CASE("coefficient anchors") {
    CHECK(max_abs(schmidt_coeff(0, 0, 0) - complexd(1.0, 0.0)) < 1e-15);
    CHECK(max_abs(schmidt_coeff(1, 0, 0) - complexd(kInvSqrt2, 0.0)) < 1e-15);
    CHECK(max_abs(schmidt_coeff(1, 0, 1) - complexd(0.0, kInvSqrt2)) < 1e-15);
    CHECK(max_abs(schmidt_coeff(1, 1, 0) - complexd(kInvSqrt2, 0.0)) < 1e-15);
    CHECK(max_abs(schmidt_coeff(1, 1, 1)) < 1e-15);
    CHECK(max_abs(schmidt_coeff(1, 1, 2) - complexd(kInvSqrt2, 0.0)) < 1e-15);
}

TEST_CASE("index guards") {
    CHECK_THROWS_AS(schmidt_coeff(1, 1, 3), IndexOutOfRangeError);
    CHECK_THROWS_AS(schmidt_coeff(1, 1, -1), IndexOutOfRangeError);
    CHECK_THROWS_AS(schmidt_coeff(16, 15, 0), OrderTooLargeError);
}

TEST_CASE("coefficient vectors are unit norm up to high order") {
    for (int m = 0; m <= 10; ++m) {
        for (int n = 0; m + n <= 10; ++n) {
            const auto d = decompose(m, n);
            double norm = 0.0;
            for (const auto& c : d.coefficients) norm += std::norm(c);
            CHECK(std::abs(norm - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("index swap preserves coefficient magnitudes") {
    for (int m = 0; m <= 6; ++m) {
        for (int n = 0; m + n <= 6; ++n) {
            for (int k = 0; k <= m + n; ++k) {
                CHECK(std::abs(std::abs(schmidt_coeff(m, n, k)) -
                               std::abs(schmidt_coeff(n, m, k))) < 1e-15);
            }
        }
    }
}

TEST_CASE("expansion reconstructs the lg field pointwise") {
    modes::GridSpec grid(6.0, 121);
    for (int m = 0; m <= 5; ++m) {
        for (int n = 0; m + n <= 5; ++n) {
            const auto beam = decompose_lg(m, n);
            double worst = 0.0;
            for (int iy = 0; iy < grid.samples_per_axis(); ++iy) {
                for (int ix = 0; ix < grid.samples_per_axis(); ++ix) {
                    const double X = grid.coordinate(ix);
                    const double Y = grid.coordinate(iy);
                    worst = std::max(worst,
                                     std::abs(modes::eval_beam(beam, X, Y) -
                                              modes::eval_lg(m, n, X, Y)));
                }
            }
            CHECK(worst < 1e-10);
        }
    }
}

TEST_CASE("expansion terms pair coefficients with descending hg orders") {
    const auto beam = decompose_lg(1, 0);
    REQUIRE(beam.terms().size() == 2);
    CHECK(beam.terms()[0].mode.family == modes::ModeFamily::HG);
    CHECK(beam.terms()[0].mode.m == 1);
    CHECK(beam.terms()[0].mode.n == 0);
    CHECK(beam.terms()[1].mode.m == 0);
    CHECK(beam.terms()[1].mode.n == 1);
    CHECK(max_abs(beam.terms()[0].coefficient - complexd(kInvSqrt2, 0.0)) < 1e-14);
    CHECK(max_abs(beam.terms()[1].coefficient - complexd(0.0, kInvSqrt2)) < 1e-14);
}

TEST_CASE("entropy and schmidt number anchors") {
    const auto e00 = schmidt_entropy(decompose(0, 0));
    CHECK(e00.entropy == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(e00.schmidt_number == doctest::Approx(1.0).epsilon(1e-14));

    const auto e10 = schmidt_entropy(decompose(1, 0));
    CHECK(e10.entropy == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(e10.schmidt_number == doctest::Approx(2.0).epsilon(1e-14));

    const auto e11 = schmidt_entropy(decompose(1, 1));
    CHECK(e11.entropy == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(e11.schmidt_number == doctest::Approx(2.0).epsilon(1e-14));
}

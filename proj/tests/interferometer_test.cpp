#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "vortexbell/bell.hpp"
#include "vortexbell/errors.hpp"
#include "vortexbell/interferometer.hpp"
#include "vortexbell/modes.hpp"
#include "vortexbell/wigner.hpp"

using namespace vortexbell;
using namespace vortexbell::interferometer;
using modes::BeamSpec;
using modes::FieldGrid;
using modes::GridSpec;
using modes::ModeIndex;
using modes::WeightedMode;
using modes::complexd;
using wigner::PhaseSpacePoint;

namespace {

const double kPi = 3.14159265358979323846;

GridSpec default_grid() { return GridSpec(6.0, 241); }

BeamSpec single(modes::ModeFamily family, int m, int n) {
    return BeamSpec::single(modes::ModeIndex(family, m, n));
}

double uniform_pm1(std::mt19937_64& rng) {
    return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace

TEST_CASE("frame and parameter guards") {
    GridSpec grid(2.0, 5);
    std::vector<double> ok(25, 0.5);
    CCDFrame frame(grid, ok);
    CHECK(frame.at(2, 2) == 0.5);
    CHECK(frame.total_power() == doctest::Approx(25 * 0.5 * grid.pixel_area()));
    CHECK_THROWS_AS(frame.at(5, 0), IndexOutOfRangeError);
    CHECK_THROWS_AS(frame.at(0, -1), IndexOutOfRangeError);

    std::vector<double> negative(25, 0.5);
    negative[7] = -1e-12;
    CHECK_THROWS_AS(CCDFrame(grid, negative), std::invalid_argument);
    CHECK_THROWS_AS(CCDFrame(grid, std::vector<double>(24, 0.0)), std::invalid_argument);

    CHECK_THROWS_AS(RegionOfInterest(0.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(RegionOfInterest(0.0, 0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(RegionOfInterest(std::nan(""), 0.0, 1.0), std::invalid_argument);

    CHECK_THROWS_AS(NoiseModel(0.5, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(NoiseModel(-0.01, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(NoiseModel(0.01, -1e-9, 1), std::invalid_argument);
    NoiseModel strong(0.49, 0.0, 1);
    CHECK(strong.intensity_jitter_rel() == 0.49);
    NoiseModel reference = NoiseModel::reference(7, 0.2);
    CHECK(reference.intensity_jitter_rel() == 0.01);
    CHECK(reference.ccd_noise_abs() == doctest::Approx(2e-6));
    CHECK(reference.seed() == 7);
    CHECK(NoiseModel::off().intensity_jitter_rel() == 0.0);
}

TEST_CASE("default disc leaves a guard band inside the window") {
    RegionOfInterest roi = RegionOfInterest::default_for(default_grid());
    CHECK(roi.center_x() == 0.0);
    CHECK(roi.center_y() == 0.0);
    CHECK(roi.radius() == doctest::Approx(5.5));
    CHECK(roi.contains(5.4, 0.0));
    CHECK(!roi.contains(5.6, 0.0));
    CHECK(roi.contains(3.0, 3.0));

    // Small windows keep three quarters of the half-extent instead.
    RegionOfInterest tight = RegionOfInterest::default_for(GridSpec(1.0, 11));
    CHECK(tight.radius() == doctest::Approx(0.75));
}

TEST_CASE("displacement: identity, aligned shift, pure phase") {
    GridSpec grid = default_grid();
    FieldGrid field = modes::sample_grid(single(modes::ModeFamily::LG, 1, 0), grid);

    FieldGrid same = displace(field, PhaseSpacePoint::origin());
    REQUIRE(same.values().size() == field.values().size());
    for (std::size_t i = 0; i < field.values().size(); ++i) {
        CHECK(same.values()[i] == field.values()[i]);
    }

    // 0.45 is nine grid steps: resampling lands on sample points.
    FieldGrid shifted = displace(field, PhaseSpacePoint(0.45, 0.0, 0.0, 0.0));
    CHECK(std::abs(shifted.total_power() - field.total_power()) < 1e-9);

    // Momentum-only displacement multiplies by a unit phase pointwise.
    FieldGrid tilted = displace(field, PhaseSpacePoint(0.0, 0.7, 0.0, -0.3));
    CHECK(std::abs(tilted.total_power() - field.total_power()) < 1e-12);
    for (std::size_t i = 0; i < field.values().size(); i += 1001) {
        CHECK(std::abs(tilted.values()[i]) ==
              doctest::Approx(std::abs(field.values()[i])).epsilon(1e-12));
    }
}

TEST_CASE("displacement clipping guard") {
    GridSpec grid = default_grid();
    FieldGrid field = modes::sample_grid(single(modes::ModeFamily::LG, 1, 0), grid);
    CHECK_THROWS_AS(displace(field, PhaseSpacePoint(4.5, 0.0, 0.0, 0.0)),
                    DisplacementTooLargeError);
    CHECK_THROWS_AS(displace(field, PhaseSpacePoint(0.0, 0.0, 9.0, 0.0)),
                    DisplacementTooLargeError);
    CHECK_NOTHROW(displace(field, PhaseSpacePoint(1.5, 0.0, -1.5, 0.0)));
}

TEST_CASE("point inversion is an exact permutation") {
    GridSpec grid(4.0, 81);
    FieldGrid odd = modes::sample_grid(single(modes::ModeFamily::HG, 1, 0), grid);
    FieldGrid odd_flipped = invert(odd);
    for (std::size_t i = 0; i < odd.values().size(); ++i) {
        CHECK(odd_flipped.values()[i] == -odd.values()[i]);
    }

    FieldGrid even = modes::sample_grid(single(modes::ModeFamily::LG, 2, 0), grid);
    FieldGrid even_flipped = invert(even);
    for (std::size_t i = 0; i < even.values().size(); ++i) {
        CHECK(even_flipped.values()[i] == even.values()[i]);
    }

    FieldGrid roomy = modes::sample_grid(single(modes::ModeFamily::LG, 2, 0), default_grid());
    FieldGrid generic = displace(roomy, PhaseSpacePoint(0.31, -0.6, 0.12, 0.77));
    FieldGrid twice = invert(invert(generic));
    for (std::size_t i = 0; i < generic.values().size(); ++i) {
        CHECK(twice.values()[i] == generic.values()[i]);
    }
}

TEST_CASE("interference ports conserve and split power") {
    GridSpec grid = default_grid();
    FieldGrid a = modes::sample_grid(single(modes::ModeFamily::LG, 1, 0), grid);

    auto self = interfere(a, a);
    CHECK(self.first.total_power() == doctest::Approx(a.total_power()).epsilon(1e-12));
    CHECK(self.second.total_power() == 0.0);

    FieldGrid minus(grid, a.values());
    for (auto& v : minus.values()) {
        v = -v;
    }
    auto swapped = interfere(a, minus);
    CHECK(swapped.first.total_power() == 0.0);
    CHECK(swapped.second.total_power() == doctest::Approx(a.total_power()).epsilon(1e-12));

    // Odd-parity vortex against its inverted copy: the bright port goes
    // fully dark, pixel by pixel.
    auto ports = interfere(a, invert(a));
    CHECK(ports.first.total_power() == 0.0);
    CHECK(ports.second.total_power() == doctest::Approx(a.total_power()).epsilon(1e-12));

    // Conservation for a generic displaced field.
    FieldGrid moved = displace(a, PhaseSpacePoint(0.33, 0.7, -0.2, -0.41));
    auto generic = interfere(moved, invert(moved));
    CHECK(std::abs(generic.first.total_power() + generic.second.total_power() -
                   moved.total_power()) < 1e-10);

    CHECK_THROWS_AS(interfere(a, modes::sample_grid(single(modes::ModeFamily::LG, 1, 0),
                                                    GridSpec(6.0, 121))),
                    GridMismatchError);
}

TEST_CASE("disc integration geometry") {
    GridSpec grid = default_grid();
    int n = grid.samples_per_axis();
    CCDFrame zero(grid, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0));
    RegionOfInterest roi = RegionOfInterest::default_for(grid);
    CHECK(integrate_roi(zero, roi) == 0.0);

    // Uniform frame over the window-inscribed circle: area times value,
    // off by at most a one-pixel-wide ring along the perimeter.
    double value = 0.7;
    CCDFrame uniform(grid, std::vector<double>(static_cast<std::size_t>(n) * n, value));
    RegionOfInterest inscribed(0.0, 0.0, grid.half_extent());
    double got = integrate_roi(uniform, inscribed);
    double want = value * kPi * grid.half_extent() * grid.half_extent();
    CHECK(std::abs(got - want) < value * 2.0 * kPi * grid.half_extent() * grid.step());

    CHECK_THROWS_AS(integrate_roi(uniform, RegionOfInterest(3.0, 0.0, 4.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate_roi(uniform, RegionOfInterest(0.0, -5.0, 1.5)),
                    std::invalid_argument);
    CHECK_NOTHROW(integrate_roi(uniform, RegionOfInterest(4.0, -4.0, 1.0)));
}

TEST_CASE("parity chain hits the analytic anchors") {
    GridSpec grid = default_grid();
    RegionOfInterest roi = RegionOfInterest::default_for(grid);

    // Odd modes interfere to an exactly dark bright port at the origin.
    CHECK(measure_parity(single(modes::ModeFamily::LG, 1, 0), PhaseSpacePoint::origin(), grid,
                         roi) == -1.0);
    CHECK(measure_parity(single(modes::ModeFamily::HG, 1, 0), PhaseSpacePoint::origin(), grid,
                         roi) == -1.0);
    CHECK(measure_parity(single(modes::ModeFamily::LG, 2, 0), PhaseSpacePoint::origin(), grid,
                         roi) == doctest::Approx(1.0).epsilon(1e-9));

    // Displaced vortex against the closed-form kernel; the nine-step shift
    // resamples exactly, so only window truncation is left.
    BeamSpec lg10 = single(modes::ModeFamily::LG, 1, 0);
    PhaseSpacePoint displaced_pt(0.45, 0.0, 0.0, 0.45);
    double chain = measure_parity(lg10, displaced_pt, grid, roi);
    double analytic = bell::bell_kernel(lg10, displaced_pt);
    CHECK(std::abs(chain - analytic) < 1e-8);
    CHECK(std::abs(chain - analytic) < 2e-3);
}

TEST_CASE("chain tracks the analytic kernel at generic settings") {
    GridSpec grid = default_grid();
    RegionOfInterest roi = RegionOfInterest::default_for(grid);
    std::mt19937_64 rng(618);
    std::vector<BeamSpec> beams{single(modes::ModeFamily::HG, 1, 0),
                                single(modes::ModeFamily::LG, 1, 0),
                                single(modes::ModeFamily::LG, 2, 0)};
    for (const auto& beam : beams) {
        for (int i = 0; i < 4; ++i) {
            PhaseSpacePoint pt(uniform_pm1(rng), uniform_pm1(rng), uniform_pm1(rng),
                               uniform_pm1(rng));
            double chain = measure_parity(beam, pt, grid, roi);
            CHECK(std::abs(chain - bell::bell_kernel(beam, pt)) < 2e-3);
            CHECK(chain >= -1.0 - 1e-9);
            CHECK(chain <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("noisy readings stay unbiased and reproducible") {
    GridSpec grid = default_grid();
    RegionOfInterest roi = RegionOfInterest::default_for(grid);
    BeamSpec lg10 = single(modes::ModeFamily::LG, 1, 0);
    bell::BellSettings displaced({0.45, 0.0}, {0.0, 0.0}, {0.0, 0.45}, {0.0, 0.0});

    BellExperimentReport clean =
        run_bell_experiment(lg10, displaced, 1, grid, roi, NoiseModel::off());
    BellExperimentReport noisy =
        run_bell_experiment(lg10, displaced, 10000, grid, roi, NoiseModel(0.01, 0.0, 424242));
    const std::vector<double>& samples = noisy.parity_samples[0];
    double mean = 0.0;
    for (double v : samples) {
        mean += v;
    }
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double v : samples) {
        var += (v - mean) * (v - mean);
    }
    var /= static_cast<double>(samples.size() - 1);
    double standard_error = std::sqrt(var / static_cast<double>(samples.size()));
    CHECK(std::abs(mean - clean.parity_samples[0][0]) < 3.0 * standard_error);

    // Same seed: bit-equal report. Different seed: different samples.
    BellExperimentReport again =
        run_bell_experiment(lg10, displaced, 64, grid, roi, NoiseModel(0.01, 2e-6, 99991));
    BellExperimentReport match =
        run_bell_experiment(lg10, displaced, 64, grid, roi, NoiseModel(0.01, 2e-6, 99991));
    CHECK(again.mean == match.mean);
    CHECK(again.q25 == match.q25);
    CHECK(again.q75 == match.q75);
    CHECK(again.min == match.min);
    CHECK(again.max == match.max);
    for (std::size_t i = 0; i < again.bell_samples.size(); ++i) {
        CHECK(again.bell_samples[i] == match.bell_samples[i]);
    }
    BellExperimentReport other =
        run_bell_experiment(lg10, displaced, 64, grid, roi, NoiseModel(0.01, 2e-6, 7));
    CHECK(other.bell_samples[0] != again.bell_samples[0]);

    // Growing the trial count preserves the earlier trials.
    BellExperimentReport longer =
        run_bell_experiment(lg10, displaced, 96, grid, roi, NoiseModel(0.01, 2e-6, 99991));
    for (std::size_t i = 0; i < again.bell_samples.size(); ++i) {
        CHECK(longer.bell_samples[i] == again.bell_samples[i]);
    }

    // Extreme jitter can drive the input reading non-positive.
    CHECK_THROWS_AS(measure_parity(lg10, PhaseSpacePoint(0.3, 0.0, 0.0, 0.3), GridSpec(6.0, 61),
                                   RegionOfInterest::default_for(GridSpec(6.0, 61)),
                                   NoiseModel(0.49, 0.0, 40)),
                    NormalizationFailureError);
}

TEST_CASE("reports aggregate the four-setting runs") {
    GridSpec grid = default_grid();
    RegionOfInterest roi = RegionOfInterest::default_for(grid);
    bell::BellSettings settings = bell::BellSettings::diagonal(-0.45, -0.45);

    SUBCASE("noise off reproduces the reference beam set") {
        struct Case {
            BeamSpec beam;
            double want;
        };
        std::vector<Case> cases;
        cases.push_back({single(modes::ModeFamily::HG, 1, 0), -1.91});
        cases.push_back({BeamSpec({WeightedMode{complexd(0.4, 0.0), ModeIndex::hg(1, 0)},
                                   WeightedMode{complexd(0.0, 0.6), ModeIndex::hg(0, 1)}}),
                         -2.15});
        cases.push_back({single(modes::ModeFamily::LG, 1, 0), -2.17});
        for (const auto& c : cases) {
            BellExperimentReport report =
                run_bell_experiment(c.beam, settings, 3, grid, roi, NoiseModel::off());
            CHECK(std::abs(report.mean - c.want) < 0.02);
            // Noise off: every trial reads the same chain.
            CHECK(report.min == report.max);
            CHECK(report.q25 == report.mean);
            CHECK(report.q75 == report.mean);
            for (double b : report.bell_samples) {
                CHECK(b == report.mean);
            }
        }
    }

    SUBCASE("per-trial sums combine the four parities with + + + -") {
        BellExperimentReport report =
            run_bell_experiment(single(modes::ModeFamily::LG, 1, 0), settings, 16, grid, roi,
                                NoiseModel(0.05, 1e-6, 31337));
        REQUIRE(report.bell_samples.size() == 16);
        for (std::size_t t = 0; t < report.bell_samples.size(); ++t) {
            double assembled = report.parity_samples[0][t] + report.parity_samples[1][t] +
                               report.parity_samples[2][t] - report.parity_samples[3][t];
            CHECK(report.bell_samples[t] == assembled);
        }
        CHECK(report.min <= report.q25);
        CHECK(report.q25 <= report.q75);
        CHECK(report.q75 <= report.max);
        CHECK(report.seed == 31337);
    }

    SUBCASE("spread grows with the mode order") {
        BellExperimentReport narrow =
            run_bell_experiment(single(modes::ModeFamily::LG, 1, 0), settings, 500, grid, roi,
                                NoiseModel(0.01, 0.0, 99991));
        BellExperimentReport wide =
            run_bell_experiment(single(modes::ModeFamily::LG, 2, 0), settings, 500, grid, roi,
                                NoiseModel(0.01, 0.0, 99991));
        CHECK(wide.q75 - wide.q25 > narrow.q75 - narrow.q25);
    }

    SUBCASE("trial count guard") {
        CHECK_THROWS_AS(run_bell_experiment(single(modes::ModeFamily::LG, 1, 0), settings, 0,
                                            grid, roi, NoiseModel::off()),
                        std::invalid_argument);
        BellExperimentReport one = run_bell_experiment(single(modes::ModeFamily::LG, 1, 0),
                                                       settings, 1, grid, roi, NoiseModel::off());
        CHECK(one.q25 == one.bell_samples[0]);
        CHECK(one.q75 == one.bell_samples[0]);
        CHECK(one.min == one.max);
    }
}

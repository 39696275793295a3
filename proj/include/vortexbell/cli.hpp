#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "vortexbell/bell.hpp"
#include "vortexbell/interferometer.hpp"
#include "vortexbell/modes.hpp"
#include "vortexbell/wigner.hpp"

// Flag-value parsing and JSON serialization for the command-line front end.
// Every parse_* function has a matching canonical_* form that re-serializes
// its result so that a run's config echo parses back to the same objects.

namespace vortexbell::cli {

// A malformed flag value; the front end reports it as a usage error
// (exit code 2) rather than a computational failure.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ParsedBeam {
    modes::BeamSpec beam;
    std::string canonical;  // normalized coefficients, parses back to `beam`
};

// Beam mini-grammar: terms joined by '+'/'-', each of the form
// [coefficient]['i']['*']<hg|lg>:m,n — e.g. "lg:1,0",
// "0.4*hg:1,0+0.6i*hg:0,1", "hg:2,0-i*lg:1,1". An optional comma list of
// real weights (one per term) multiplies the inline coefficients; the
// resulting superposition is normalized by BeamSpec.
ParsedBeam parse_beam(const std::string& text,
                      const std::optional<std::string>& weights = std::nullopt);

// Measurement settings. Canonical form has four ';'-separated pairs
// "ax,ap;a'x,a'p;by,bp;b'y,b'p" (alpha, alpha', beta, beta'); also accepted
// are two joint four-tuples "ax,ap,by,bp;a'x,a'p,b'y,b'p" and a flat list
// of all eight numbers in canonical order.
bell::BellSettings parse_settings(const std::string& text);
std::string canonical_settings(const bell::BellSettings& settings);

// "L:N" — window half-extent and odd sample count.
modes::GridSpec parse_grid(const std::string& text);
std::string canonical_grid(const modes::GridSpec& grid);

// "x,px,y,py" phase-space points; parse_points takes a ';'-separated list.
wigner::PhaseSpacePoint parse_point(const std::string& text);
std::vector<wigner::PhaseSpacePoint> parse_points(const std::string& text);

// "cx,cy,radius" integration disc.
interferometer::RegionOfInterest parse_roi(const std::string& text);
std::string canonical_roi(const interferometer::RegionOfInterest& roi);

// "sigma_rel,sigma_abs" noise magnitudes (seed supplied separately).
std::pair<double, double> parse_noise(const std::string& text);

nlohmann::ordered_json settings_json(const bell::BellSettings& settings);

// Report fields: settings, samples, mean, q25, q75, min, max, seed.
nlohmann::ordered_json report_json(const interferometer::BellExperimentReport& report);

}  // namespace vortexbell::cli

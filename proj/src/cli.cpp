#include "vortexbell/cli.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <regex>

namespace vortexbell::cli {
namespace {

std::string strip_spaces(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            out.push_back(c);
        }
    }
    return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_number(const std::string& text, const char* what) {
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(value)) {
        throw UsageError(std::string(what) + ": not a finite number: '" + text + "'");
    }
    return value;
}

long parse_integer(const std::string& text, const char* what) {
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    long value = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0' || errno == ERANGE) {
        throw UsageError(std::string(what) + ": not an integer: '" + text + "'");
    }
    return value;
}

std::vector<double> parse_numbers(const std::string& text, const char* what) {
    std::vector<double> values;
    for (const std::string& part : split(text, ',')) {
        values.push_back(parse_number(part, what));
    }
    return values;
}

// Splits a beam expression into signed terms, leaving exponent signs
// ("1e-3") untouched.
std::vector<std::string> split_terms(const std::string& text) {
    std::vector<std::string> terms;
    std::string current;
    for (char c : text) {
        if ((c == '+' || c == '-') && !current.empty() && current.back() != 'e' &&
            current.back() != 'E') {
            terms.push_back(current);
            current.clear();
            if (c == '-') {
                current.push_back(c);
            }
            continue;
        }
        current.push_back(c);
    }
    terms.push_back(current);
    return terms;
}

std::string format_number(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

// One pre-normalization term as grammar text, e.g. "-0.59999999999999998i*hg:0,1".
std::string format_term(const modes::WeightedMode& term) {
    modes::complexd c = term.coefficient;
    std::string coeff;
    if (c.imag() == 0.0) {
        coeff = format_number(c.real()) + "*";
    } else if (c.real() == 0.0) {
        coeff = format_number(c.imag()) + "i*";
    } else {
        throw UsageError("beam term coefficients must be purely real or purely imaginary");
    }
    const char* family = term.mode.family == modes::ModeFamily::HG ? "hg" : "lg";
    return coeff + family + ":" + std::to_string(term.mode.m) + "," +
           std::to_string(term.mode.n);
}

}  // namespace

ParsedBeam parse_beam(const std::string& text, const std::optional<std::string>& weights) {
    static const std::regex term_pattern(
        R"(^([+-]?)((?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)?(i?)\*?(hg|lg):(\d+),(\d+)$)",
        std::regex::icase);

    std::string compact = strip_spaces(text);
    if (compact.empty()) {
        throw UsageError("beam expression is empty");
    }
    std::vector<modes::WeightedMode> terms;
    for (const std::string& term_text : split_terms(compact)) {
        std::smatch match;
        if (!std::regex_match(term_text, match, term_pattern)) {
            throw UsageError("malformed beam term '" + term_text +
                             "' (expected [coeff][i][*]<hg|lg>:m,n)");
        }
        double magnitude = match[2].length() == 0 ? 1.0 : parse_number(match[2], "beam");
        if (match[1] == "-") {
            magnitude = -magnitude;
        }
        modes::complexd coefficient = match[3].length() != 0
                                          ? modes::complexd(0.0, magnitude)
                                          : modes::complexd(magnitude, 0.0);
        std::string family_text = match[4];
        modes::ModeFamily family = (family_text[0] == 'h' || family_text[0] == 'H')
                                       ? modes::ModeFamily::HG
                                       : modes::ModeFamily::LG;
        long m = parse_integer(match[5], "beam index");
        long n = parse_integer(match[6], "beam index");
        terms.push_back({coefficient, modes::ModeIndex(family, static_cast<int>(m),
                                                       static_cast<int>(n))});
    }

    if (weights) {
        std::vector<double> w = parse_numbers(strip_spaces(*weights), "weights");
        if (w.size() != terms.size()) {
            throw UsageError("got " + std::to_string(w.size()) + " weights for " +
                             std::to_string(terms.size()) + " beam terms");
        }
        for (std::size_t i = 0; i < terms.size(); ++i) {
            terms[i].coefficient *= w[i];
        }
    }

    // The canonical form echoes the pre-normalization coefficients (weights
    // folded in) so re-parsing it rebuilds the identical beam bit-for-bit.
    std::string canonical;
    for (const auto& term : terms) {
        std::string piece = format_term(term);
        if (!canonical.empty() && piece[0] != '-') {
            canonical += "+";
        }
        canonical += piece;
    }
    return ParsedBeam{modes::BeamSpec(terms), canonical};
}

bell::BellSettings parse_settings(const std::string& text) {
    std::vector<std::string> segments = split(strip_spaces(text), ';');
    std::vector<double> flat;
    if (segments.size() == 4) {
        for (const std::string& segment : segments) {
            std::vector<double> pair = parse_numbers(segment, "settings");
            if (pair.size() != 2) {
                throw UsageError("settings segment '" + segment + "' must be x,p");
            }
            flat.insert(flat.end(), pair.begin(), pair.end());
        }
        return bell::BellSettings({flat[0], flat[1]}, {flat[2], flat[3]}, {flat[4], flat[5]},
                                  {flat[6], flat[7]});
    }
    if (segments.size() == 2) {
        // Two joint four-tuples: (alpha, beta); (alpha', beta').
        std::vector<double> first = parse_numbers(segments[0], "settings");
        std::vector<double> second = parse_numbers(segments[1], "settings");
        if (first.size() != 4 || second.size() != 4) {
            throw UsageError("joint settings segments must be x,px,y,py");
        }
        return bell::BellSettings({first[0], first[1]}, {second[0], second[1]},
                                  {first[2], first[3]}, {second[2], second[3]});
    }
    if (segments.size() == 1) {
        std::vector<double> all = parse_numbers(segments[0], "settings");
        if (all.size() != 8) {
            throw UsageError("flat settings need eight numbers "
                             "(ax,ap,a'x,a'p,by,bp,b'y,b'p)");
        }
        return bell::BellSettings({all[0], all[1]}, {all[2], all[3]}, {all[4], all[5]},
                                  {all[6], all[7]});
    }
    throw UsageError("settings need 1, 2, or 4 ';'-separated segments");
}

std::string canonical_settings(const bell::BellSettings& settings) {
    auto pair_text = [](const bell::SettingPair& p) {
        return format_number(p.x) + "," + format_number(p.p);
    };
    return pair_text(settings.alpha()) + ";" + pair_text(settings.alpha_prime()) + ";" +
           pair_text(settings.beta()) + ";" + pair_text(settings.beta_prime());
}

modes::GridSpec parse_grid(const std::string& text) {
    std::vector<std::string> parts = split(strip_spaces(text), ':');
    if (parts.size() != 2) {
        throw UsageError("grid must be L:N, got '" + text + "'");
    }
    double extent = parse_number(parts[0], "grid extent");
    long count = parse_integer(parts[1], "grid samples");
    if (count < 3 || count > 1 << 20) {
        throw UsageError("grid sample count out of range: " + parts[1]);
    }
    return modes::GridSpec(extent, static_cast<int>(count));
}

std::string canonical_grid(const modes::GridSpec& grid) {
    return format_number(grid.half_extent()) + ":" + std::to_string(grid.samples_per_axis());
}

wigner::PhaseSpacePoint parse_point(const std::string& text) {
    std::vector<double> v = parse_numbers(strip_spaces(text), "point");
    if (v.size() != 4) {
        throw UsageError("phase-space point must be x,px,y,py, got '" + text + "'");
    }
    return wigner::PhaseSpacePoint(v[0], v[1], v[2], v[3]);
}

std::vector<wigner::PhaseSpacePoint> parse_points(const std::string& text) {
    std::vector<wigner::PhaseSpacePoint> points;
    for (const std::string& segment : split(strip_spaces(text), ';')) {
        points.push_back(parse_point(segment));
    }
    return points;
}

interferometer::RegionOfInterest parse_roi(const std::string& text) {
    std::vector<double> v = parse_numbers(strip_spaces(text), "roi");
    if (v.size() != 3) {
        throw UsageError("roi must be cx,cy,radius, got '" + text + "'");
    }
    return interferometer::RegionOfInterest(v[0], v[1], v[2]);
}

std::string canonical_roi(const interferometer::RegionOfInterest& roi) {
    return format_number(roi.center_x()) + "," + format_number(roi.center_y()) + "," +
           format_number(roi.radius());
}

std::pair<double, double> parse_noise(const std::string& text) {
    std::vector<double> v = parse_numbers(strip_spaces(text), "noise");
    if (v.size() != 2) {
        throw UsageError("noise must be sigma_rel,sigma_abs, got '" + text + "'");
    }
    return {v[0], v[1]};
}

nlohmann::ordered_json settings_json(const bell::BellSettings& settings) {
    auto pair_json = [](const bell::SettingPair& p) {
        return nlohmann::ordered_json{{"x", p.x}, {"p", p.p}};
    };
    return nlohmann::ordered_json{{"alpha", pair_json(settings.alpha())},
                                  {"alpha_prime", pair_json(settings.alpha_prime())},
                                  {"beta", pair_json(settings.beta())},
                                  {"beta_prime", pair_json(settings.beta_prime())}};
}

nlohmann::ordered_json report_json(const interferometer::BellExperimentReport& report) {
    return nlohmann::ordered_json{{"settings", settings_json(report.settings)},
                                  {"samples", report.bell_samples},
                                  {"mean", report.mean},
                                  {"q25", report.q25},
                                  {"q75", report.q75},
                                  {"min", report.min},
                                  {"max", report.max},
                                  {"seed", report.seed}};
}

}  // namespace vortexbell::cli

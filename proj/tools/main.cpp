// Command-line front end: modes / wigner / bell / experiment subcommands.
// Exit codes: 0 success, 1 computational failure, 2 usage error. All output
// files are deterministic for fixed flags and seed; config echoes repeat the
// raw flag values so a run can be reproduced from its own output.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vortexbell/bell.hpp"
#include "vortexbell/cli.hpp"
#include "vortexbell/errors.hpp"
#include "vortexbell/interferometer.hpp"
#include "vortexbell/io.hpp"
#include "vortexbell/modes.hpp"
#include "vortexbell/wigner.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace vortexbell;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Relative output paths land in VORTEXBELL_OUT_DIR when it is set.
fs::path resolve_out(const std::string& out) {
    fs::path path(out);
    if (path.is_absolute()) {
        return path;
    }
    const char* dir = std::getenv("VORTEXBELL_OUT_DIR");
    return (dir != nullptr && *dir != '\0') ? fs::path(dir) / path : path;
}

void write_json(const ordered_json& doc, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << doc.dump(2) << "\n";
    if (!out) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

// "name.pgm" -> "name", keeping directories; outputs then get their own
// ".amplitude.pgm", ".json", ... suffixes.
fs::path base_path(const std::string& out) {
    fs::path resolved = resolve_out(out);
    resolved.replace_extension("");
    return resolved;
}

std::string with_suffix(const fs::path& base, const std::string& suffix) {
    return base.string() + suffix;
}

struct ModesArgs {
    std::string beam = "lg:1,0";
    std::optional<std::string> weights;
    std::string grid = "6:241";
    std::string out = "modes";
    std::string format = "pgm";
};

struct WignerArgs {
    std::string beam = "lg:1,0";
    std::optional<std::string> points;
    std::optional<std::string> slice;
    double extent = 2.0;
    int count = 41;
    bool check = false;
    double tol = 1e-6;
    std::string out = "wigner";
    std::string format = "json";
};

struct BellArgs {
    std::string beam = "lg:1,0";
    std::optional<std::string> settings;
    std::optional<std::string> optimize;
    std::optional<int> curve;
    std::int64_t budget = 200000;
    std::uint64_t seed = 12345;
    std::string out = "bell";
};

struct ExperimentArgs {
    std::string beam = "lg:1,0";
    std::optional<std::string> settings;
    bool suite = false;
    int trials = 1;
    std::string grid = "6:241";
    std::optional<std::string> roi;
    std::optional<std::string> noise;
    std::uint64_t seed = 12345;
    bool frames = false;
    std::string out = "experiment";
};

int run_modes(const ModesArgs& args) {
    cli::ParsedBeam parsed = cli::parse_beam(args.beam, args.weights);
    modes::GridSpec grid = cli::parse_grid(args.grid);
    if (args.format != "pgm" && args.format != "csv" && args.format != "both") {
        throw cli::UsageError("modes --format must be pgm, csv, or both");
    }
    fs::path base = base_path(args.out);

    modes::FieldGrid field = modes::sample_grid(parsed.beam, grid);
    std::vector<double> amplitude(field.values().size());
    std::vector<double> phase(field.values().size());
    double amplitude_max = 0.0;
    for (std::size_t i = 0; i < field.values().size(); ++i) {
        amplitude[i] = std::abs(field.values()[i]);
        phase[i] = std::arg(field.values()[i]);
        amplitude_max = std::max(amplitude_max, amplitude[i]);
    }

    ordered_json files = ordered_json::array();
    bool pgm = args.format == "pgm" || args.format == "both";
    bool csv = args.format == "csv" || args.format == "both";
    if (pgm) {
        io::write_pgm16(grid, amplitude, 0.0, amplitude_max > 0.0 ? amplitude_max : 1.0,
                        with_suffix(base, ".amplitude.pgm"));
        io::write_pgm16(grid, phase, -kPi, kPi, with_suffix(base, ".phase.pgm"));
        files.push_back(base.filename().string() + ".amplitude.pgm");
        files.push_back(base.filename().string() + ".phase.pgm");
    }
    if (csv) {
        io::write_grid_csv(grid, amplitude, with_suffix(base, ".amplitude.csv"));
        io::write_grid_csv(grid, phase, with_suffix(base, ".phase.csv"));
        files.push_back(base.filename().string() + ".amplitude.csv");
        files.push_back(base.filename().string() + ".phase.csv");
    }

    ordered_json config{{"command", "modes"},
                        {"beam", parsed.canonical},
                        {"grid", cli::canonical_grid(grid)},
                        {"format", args.format},
                        {"out", args.out}};
    ordered_json doc{{"config", config},
                     {"power", field.total_power()},
                     {"amplitude_max", amplitude_max},
                     {"files", files}};
    write_json(doc, with_suffix(base, ".json"));
    std::cout << "modes: wrote " << files.size() << " grid files for beam " << parsed.canonical
              << "\n";
    return 0;
}

int run_wigner(const WignerArgs& args) {
    cli::ParsedBeam parsed = cli::parse_beam(args.beam);
    if (args.points && args.slice) {
        throw cli::UsageError("wigner takes --points or --slice, not both");
    }
    if (args.format != "json" && args.format != "csv") {
        throw cli::UsageError("wigner --format must be json or csv");
    }
    fs::path base = base_path(args.out);

    const auto& terms = parsed.beam.terms();
    bool single_lg = terms.size() == 1 && terms[0].mode.family == modes::ModeFamily::LG;
    if (args.check && !single_lg) {
        throw cli::UsageError("--check compares closed-form and quadrature values and "
                              "needs a single lg:m,n beam");
    }

    ordered_json config{{"command", "wigner"}, {"beam", parsed.canonical}};
    ordered_json doc;
    auto evaluate = [&](const wigner::PhaseSpacePoint& pt) {
        return bell::bell_kernel(parsed.beam, pt);  // pi^2 W
    };

    if (args.slice) {
        // Two varying axes, the others pinned at zero.
        std::string spec = *args.slice;
        std::size_t comma = spec.find(',');
        if (comma == std::string::npos || spec.find(',', comma + 1) != std::string::npos) {
            throw cli::UsageError("slice must name two axes, e.g. --slice x,py");
        }
        std::vector<std::string> axes{spec.substr(0, comma), spec.substr(comma + 1)};
        auto axis_index = [](const std::string& name) -> int {
            if (name == "x") return 0;
            if (name == "px") return 1;
            if (name == "y") return 2;
            if (name == "py") return 3;
            throw cli::UsageError("slice axis must be one of x, px, y, py; got '" + name + "'");
        };
        int first = axis_index(axes[0]);
        int second = axis_index(axes[1]);
        if (first == second) {
            throw cli::UsageError("slice axes must differ");
        }
        if (args.count < 2 || args.count > 2001) {
            throw cli::UsageError("slice count must lie in [2, 2001]");
        }
        if (!(args.extent > 0.0) || args.extent > 10.0) {
            throw cli::UsageError("slice extent must lie in (0, 10]");
        }
        config.push_back({"slice", axes[0] + "," + axes[1]});
        config.push_back({"extent", args.extent});
        config.push_back({"count", args.count});
        config.push_back({"out", args.out});

        std::ofstream csv_out(with_suffix(base, ".csv"), std::ios::binary);
        if (!csv_out) {
            throw std::runtime_error("cannot open " + with_suffix(base, ".csv"));
        }
        csv_out << "X,PX,Y,PY,W,pi2W\n";
        char line[256];
        double step = 2.0 * args.extent / (args.count - 1);
        for (int j = 0; j < args.count; ++j) {
            for (int i = 0; i < args.count; ++i) {
                double coords[4] = {0.0, 0.0, 0.0, 0.0};
                coords[first] = -args.extent + step * i;
                coords[second] = -args.extent + step * j;
                wigner::PhaseSpacePoint pt(coords[0], coords[1], coords[2], coords[3]);
                double pi2w = evaluate(pt);
                std::snprintf(line, sizeof(line),
                              "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", coords[0], coords[1],
                              coords[2], coords[3], pi2w / (kPi * kPi), pi2w);
                csv_out << line;
            }
        }
        if (!csv_out) {
            throw std::runtime_error("failed writing " + with_suffix(base, ".csv"));
        }
        doc = ordered_json{{"config", config},
                           {"rows_written", args.count * args.count},
                           {"csv", base.filename().string() + ".csv"}};
    } else {
        std::vector<wigner::PhaseSpacePoint> points =
            args.points ? cli::parse_points(*args.points)
                        : std::vector<wigner::PhaseSpacePoint>{wigner::PhaseSpacePoint::origin()};
        config.push_back({"points", args.points ? *args.points : std::string("0,0,0,0")});
        if (args.check) {
            config.push_back({"check", true});
            config.push_back({"tol", args.tol});
        }
        config.push_back({"out", args.out});

        ordered_json rows = ordered_json::array();
        double max_delta = 0.0;
        for (const auto& pt : points) {
            double pi2w = evaluate(pt);
            rows.push_back(ordered_json{{"X", pt.X()},
                                        {"PX", pt.PX()},
                                        {"Y", pt.Y()},
                                        {"PY", pt.PY()},
                                        {"W", pi2w / (kPi * kPi)},
                                        {"pi2W", pi2w}});
            if (args.check) {
                double numeric = kPi * kPi * wigner::wigner_numeric(parsed.beam, pt);
                max_delta = std::max(max_delta, std::abs(numeric - pi2w));
            }
        }
        if (args.check && !(max_delta <= args.tol)) {
            throw std::runtime_error("wigner check failed: quadrature and closed form differ "
                                     "by " + std::to_string(max_delta) + " > tol");
        }
        doc = ordered_json{{"config", config}, {"rows", rows}};
        if (args.check) {
            doc.push_back({"check_max_delta", max_delta});
        }
        if (args.format == "csv") {
            std::ofstream csv_out(with_suffix(base, ".csv"), std::ios::binary);
            if (!csv_out) {
                throw std::runtime_error("cannot open " + with_suffix(base, ".csv"));
            }
            csv_out << "X,PX,Y,PY,W,pi2W\n";
            char line[256];
            for (const auto& row : rows) {
                std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                              row["X"].get<double>(), row["PX"].get<double>(),
                              row["Y"].get<double>(), row["PY"].get<double>(),
                              row["W"].get<double>(), row["pi2W"].get<double>());
                csv_out << line;
            }
            doc.push_back({"csv", base.filename().string() + ".csv"});
        }
    }
    write_json(doc, with_suffix(base, ".json"));
    std::cout << "wigner: wrote " << with_suffix(base, ".json") << "\n";
    return 0;
}

int run_bell(const BellArgs& args) {
    cli::ParsedBeam parsed = cli::parse_beam(args.beam);
    int selected = (args.settings ? 1 : 0) + (args.optimize ? 1 : 0) + (args.curve ? 1 : 0);
    if (selected != 1) {
        throw cli::UsageError("bell needs exactly one of --settings, --optimize, --curve");
    }
    fs::path base = base_path(args.out);
    ordered_json config{{"command", "bell"}, {"beam", parsed.canonical}};
    ordered_json doc;

    if (args.settings) {
        bell::BellSettings settings = cli::parse_settings(*args.settings);
        double b = bell::bell_sum(parsed.beam, settings);
        config.push_back({"settings", cli::canonical_settings(settings)});
        config.push_back({"out", args.out});
        doc = ordered_json{{"config", config},
                           {"beam", parsed.canonical},
                           {"settings", cli::settings_json(settings)},
                           {"B", b},
                           {"abs_B", std::abs(b)},
                           {"violated", std::abs(b) >= 2.0}};
        std::cout << "bell: B = " << b << " (|B| " << (std::abs(b) >= 2.0 ? ">=" : "<")
                  << " 2)\n";
    } else if (args.optimize) {
        bell::SettingSpace space;
        if (*args.optimize == "diag2") {
            space = bell::SettingSpace::Diag2;
        } else if (*args.optimize == "full8") {
            space = bell::SettingSpace::Full8;
        } else {
            throw cli::UsageError("--optimize must be diag2 or full8");
        }
        bell::OptimizationResult result =
            bell::optimize_settings(parsed.beam, space, args.budget, args.seed);
        double b = bell::bell_sum(parsed.beam, result.settings);
        config.push_back({"optimize", *args.optimize});
        config.push_back({"budget", args.budget});
        config.push_back({"seed", args.seed});
        config.push_back({"out", args.out});
        doc = ordered_json{{"config", config},
                           {"beam", parsed.canonical},
                           {"settings", cli::settings_json(result.settings)},
                           {"B", b},
                           {"abs_B", result.bell_abs},
                           {"violated", result.bell_abs >= 2.0},
                           {"evaluations", result.evaluations},
                           {"converged", result.converged}};
        std::cout << "bell: optimized |B| = " << result.bell_abs << " over "
                  << result.evaluations << " evaluations\n";
    } else {
        if (*args.curve < 1 || *args.curve > 6) {
            throw cli::UsageError("--curve order must lie in [1, 6]");
        }
        auto curve = bell::violation_curve(*args.curve, bell::SettingSpace::Diag2);
        config.push_back({"curve", *args.curve});
        config.push_back({"out", args.out});
        ordered_json rows = ordered_json::array();
        for (const auto& [order, value] : curve) {
            rows.push_back(ordered_json{{"order", order}, {"abs_B", value}});
        }
        doc = ordered_json{{"config", config}, {"beam", parsed.canonical}, {"curve", rows}};
        std::cout << "bell: curve up to order " << *args.curve << "\n";
    }
    write_json(doc, with_suffix(base, ".json"));
    return 0;
}

ordered_json beam_report_json(const std::string& canonical,
                              const interferometer::BellExperimentReport& report) {
    return ordered_json{{"beam", canonical}, {"report", cli::report_json(report)}};
}

int run_experiment(const ExperimentArgs& args) {
    if (args.trials < 1) {
        throw cli::UsageError("--trials must be >= 1");
    }
    modes::GridSpec grid = cli::parse_grid(args.grid);
    interferometer::RegionOfInterest roi =
        args.roi ? cli::parse_roi(*args.roi) : interferometer::RegionOfInterest::default_for(grid);
    bell::BellSettings settings = args.settings ? cli::parse_settings(*args.settings)
                                                : bell::BellSettings::diagonal(-0.45, -0.45);
    interferometer::NoiseModel noise = interferometer::NoiseModel::off();
    if (args.noise) {
        auto [sigma_rel, sigma_abs] = cli::parse_noise(*args.noise);
        noise = interferometer::NoiseModel(sigma_rel, sigma_abs, args.seed);
    }
    fs::path base = base_path(args.out);

    ordered_json config{{"command", "experiment"},
                        {"suite", args.suite},
                        {"settings", cli::canonical_settings(settings)},
                        {"trials", args.trials},
                        {"grid", cli::canonical_grid(grid)},
                        {"roi", cli::canonical_roi(roi)},
                        {"noise", args.noise ? *args.noise : std::string("off")},
                        {"seed", args.seed},
                        {"out", args.out}};

    ordered_json doc;
    if (args.suite) {
        std::vector<std::string> beams{"hg:1,0", "0.4*hg:1,0+0.6i*hg:0,1", "lg:1,0"};
        ordered_json results = ordered_json::array();
        std::cout << "beam                          mean       q25        q75\n";
        for (const std::string& text : beams) {
            cli::ParsedBeam parsed = cli::parse_beam(text);
            interferometer::BellExperimentReport report = interferometer::run_bell_experiment(
                parsed.beam, settings, args.trials, grid, roi, noise);
            results.push_back(beam_report_json(parsed.canonical, report));
            char line[160];
            std::snprintf(line, sizeof(line), "%-28s %9.5f %9.5f %9.5f\n", text.c_str(),
                          report.mean, report.q25, report.q75);
            std::cout << line;
        }
        doc = ordered_json{{"config", config}, {"suite", results}};
    } else {
        cli::ParsedBeam parsed = cli::parse_beam(args.beam);
        config["beam"] = parsed.canonical;
        interferometer::BellExperimentReport report = interferometer::run_bell_experiment(
            parsed.beam, settings, args.trials, grid, roi, noise);
        doc = ordered_json{{"config", config},
                           {"beam", parsed.canonical},
                           {"report", cli::report_json(report)}};
        if (args.frames) {
            // Per-setting noiseless bright frames.
            modes::FieldGrid field = modes::sample_grid(parsed.beam, grid);
            const std::array<std::pair<bell::SettingPair, bell::SettingPair>, 4> joints{
                {{settings.alpha(), settings.beta()},
                 {settings.alpha(), settings.beta_prime()},
                 {settings.alpha_prime(), settings.beta()},
                 {settings.alpha_prime(), settings.beta_prime()}}};
            ordered_json frame_files = ordered_json::array();
            for (std::size_t s = 0; s < joints.size(); ++s) {
                wigner::PhaseSpacePoint pt(joints[s].first.x, joints[s].first.p,
                                           joints[s].second.x, joints[s].second.p);
                modes::FieldGrid displaced = interferometer::displace(field, pt);
                auto ports = interferometer::interfere(displaced, interferometer::invert(displaced));
                std::string name = ".setting" + std::to_string(s) + ".pgm";
                io::write_pgm16(ports.first, with_suffix(base, name));
                frame_files.push_back(base.filename().string() + name);
            }
            doc.push_back({"frames", frame_files});
        }
        std::cout << "experiment: mean B = " << report.mean << " over " << args.trials
                  << " trial(s)\n";
    }
    write_json(doc, with_suffix(base, ".json"));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vortex-beam Bell toolkit: modes, Wigner values, Bell sums, and a "
                 "simulated parity interferometer"};
    app.require_subcommand(1);

    ModesArgs modes_args;
    CLI::App* modes_cmd = app.add_subcommand("modes", "Write amplitude/phase grids for a beam");
    modes_cmd->add_option("--beam", modes_args.beam, "Beam expression, e.g. lg:1,0");
    modes_cmd->add_option("--weights", modes_args.weights, "Per-term weights, e.g. 0.4,0.6");
    modes_cmd->add_option("--grid", modes_args.grid, "Sampling window L:N");
    modes_cmd->add_option("--out", modes_args.out, "Output base path");
    modes_cmd->add_option("--format", modes_args.format, "pgm, csv, or both");

    WignerArgs wigner_args;
    CLI::App* wigner_cmd =
        app.add_subcommand("wigner", "Evaluate the phase-space distribution of a beam");
    wigner_cmd->add_option("--beam", wigner_args.beam, "Beam expression");
    wigner_cmd->add_option("--points", wigner_args.points, "x,px,y,py[;...] evaluation points");
    wigner_cmd->add_option("--slice", wigner_args.slice, "Two varying axes, e.g. x,py");
    wigner_cmd->add_option("--extent", wigner_args.extent, "Slice half-extent");
    wigner_cmd->add_option("--count", wigner_args.count, "Slice samples per axis");
    wigner_cmd->add_flag("--check", wigner_args.check,
                         "Cross-check quadrature against the closed form (single LG beams)");
    wigner_cmd->add_option("--tol", wigner_args.tol, "Check tolerance");
    wigner_cmd->add_option("--out", wigner_args.out, "Output base path");
    wigner_cmd->add_option("--format", wigner_args.format, "json or csv");

    BellArgs bell_args;
    CLI::App* bell_cmd = app.add_subcommand("bell", "Bell sums and setting optimization");
    bell_cmd->add_option("--beam", bell_args.beam, "Beam expression");
    bell_cmd->add_option("--settings", bell_args.settings,
                         "Measurement settings (see --help-all)");
    bell_cmd->add_option("--optimize", bell_args.optimize, "diag2 or full8");
    bell_cmd->add_option("--curve", bell_args.curve, "Violation curve up to this vortex order");
    bell_cmd->add_option("--budget", bell_args.budget, "Optimizer evaluation budget");
    bell_cmd->add_option("--seed", bell_args.seed, "Optimizer seed");
    bell_cmd->add_option("--out", bell_args.out, "Output base path");

    ExperimentArgs experiment_args;
    CLI::App* experiment_cmd =
        app.add_subcommand("experiment", "Run the simulated interferometer");
    experiment_cmd->add_option("--beam", experiment_args.beam, "Beam expression");
    experiment_cmd->add_option("--settings", experiment_args.settings,
                               "Measurement settings (default 0,0;-0.45,0;0,0;0,-0.45)");
    experiment_cmd->add_flag("--suite", experiment_args.suite,
                             "Run the three-beam reference suite");
    experiment_cmd->add_option("--trials", experiment_args.trials, "Trial count (>= 1)");
    experiment_cmd->add_option("--grid", experiment_args.grid, "Sampling window L:N");
    experiment_cmd->add_option("--roi", experiment_args.roi, "Integration disc cx,cy,radius");
    experiment_cmd->add_option("--noise", experiment_args.noise,
                               "sigma_rel,sigma_abs (absent: noise off)");
    experiment_cmd->add_option("--seed", experiment_args.seed, "Noise stream seed");
    experiment_cmd->add_flag("--frames", experiment_args.frames,
                             "Write per-setting bright-port frames");
    experiment_cmd->add_option("--out", experiment_args.out, "Output base path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (modes_cmd->parsed()) {
            return run_modes(modes_args);
        }
        if (wigner_cmd->parsed()) {
            return run_wigner(wigner_args);
        }
        if (bell_cmd->parsed()) {
            return run_bell(bell_args);
        }
        return run_experiment(experiment_args);
    } catch (const cli::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

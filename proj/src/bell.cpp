#include "vortexbell/bell.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace vortexbell::bell {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBoxHalfWidth = 2.0;
constexpr double kScanStep = 0.1;
constexpr double kSimplexStep = 0.05;
constexpr double kSimplexTolerance = 1e-6;
constexpr int kRefinementStarts = 5;
constexpr std::int64_t kFullScanCount = 20000;

void check_component(double value) {
    if (!std::isfinite(value) || std::abs(value) > kBoxHalfWidth) {
        throw std::invalid_argument("Bell setting components must lie in [-2, 2]");
    }
}

double clamp_to_box(double value) {
    return std::clamp(value, -kBoxHalfWidth, kBoxHalfWidth);
}

BellSettings params_to_settings(SettingSpace space, const std::vector<double>& params) {
    if (space == SettingSpace::Diag2) {
        return BellSettings::diagonal(params[0], params[1]);
    }
    return BellSettings({params[0], params[1]}, {params[2], params[3]}, {params[4], params[5]},
                        {params[6], params[7]});
}

// Portable uniform draw in [0, 1): the top 53 bits of the engine output.
double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Shared search bookkeeping: counts evaluations against the budget and
// remembers the best (lowest -|B|) point ever seen.
class SearchState {
  public:
    SearchState(const modes::BeamSpec& beam, SettingSpace space, std::int64_t budget)
        : beam_(beam), space_(space), budget_(budget) {}

    bool exhausted() const { return evaluations_ >= budget_; }
    std::int64_t evaluations() const { return evaluations_; }
    double best_value() const { return best_value_; }
    const std::vector<double>& best_params() const { return best_params_; }

    double evaluate(const std::vector<double>& params) {
        ++evaluations_;
        const double value = -std::abs(bell_sum(beam_, params_to_settings(space_, params)));
        if (best_params_.empty() || value < best_value_) {
            best_value_ = value;
            best_params_ = params;
        }
        return value;
    }

  private:
    const modes::BeamSpec& beam_;
    SettingSpace space_;
    std::int64_t budget_;
    std::int64_t evaluations_ = 0;
    double best_value_ = 0.0;
    std::vector<double> best_params_;
};

struct Candidate {
    std::vector<double> params;
    double value;
};

double simplex_diameter(const std::vector<Candidate>& simplex) {
    double diameter = 0.0;
    for (std::size_t i = 0; i < simplex.size(); ++i) {
        for (std::size_t j = i + 1; j < simplex.size(); ++j) {
            for (std::size_t k = 0; k < simplex[i].params.size(); ++k) {
                diameter = std::max(diameter,
                                    std::abs(simplex[i].params[k] - simplex[j].params[k]));
            }
        }
    }
    return diameter;
}

// Nelder-Mead with box projection (reflection 1, expansion 2, contraction
// 0.5, shrink 0.5). Returns true when the simplex collapsed below the
// diameter tolerance, false when the budget cut the run short.
bool refine_simplex(SearchState& state, const std::vector<double>& start) {
    const std::size_t dim = start.size();
    std::vector<Candidate> simplex;
    simplex.reserve(dim + 1);

    auto guarded = [&state](const std::vector<double>& params, double& out) {
        if (state.exhausted()) return false;
        out = state.evaluate(params);
        return true;
    };

    double value = 0.0;
    if (!guarded(start, value)) return false;
    simplex.push_back({start, value});
    for (std::size_t j = 0; j < dim; ++j) {
        auto vertex = start;
        vertex[j] += (vertex[j] + kSimplexStep <= kBoxHalfWidth) ? kSimplexStep : -kSimplexStep;
        if (!guarded(vertex, value)) return false;
        simplex.push_back({vertex, value});
    }

    while (true) {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
        if (simplex_diameter(simplex) < kSimplexTolerance) return true;

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i].params[k];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);
        const Candidate& worst = simplex[dim];

        auto blend = [&](double factor) {
            std::vector<double> point(dim);
            for (std::size_t k = 0; k < dim; ++k) {
                point[k] = clamp_to_box(centroid[k] + factor * (centroid[k] - worst.params[k]));
            }
            return point;
        };

        auto reflected = blend(1.0);
        double reflected_value = 0.0;
        if (!guarded(reflected, reflected_value)) return false;

        if (reflected_value < simplex[0].value) {
            auto expanded = blend(2.0);
            double expanded_value = 0.0;
            if (!guarded(expanded, expanded_value)) return false;
            simplex[dim] = expanded_value < reflected_value
                               ? Candidate{std::move(expanded), expanded_value}
                               : Candidate{std::move(reflected), reflected_value};
            continue;
        }
        if (reflected_value < simplex[dim - 1].value) {
            simplex[dim] = {std::move(reflected), reflected_value};
            continue;
        }

        auto contracted = blend(-0.5);
        double contracted_value = 0.0;
        if (!guarded(contracted, contracted_value)) return false;
        if (contracted_value < worst.value) {
            simplex[dim] = {std::move(contracted), contracted_value};
            continue;
        }

        for (std::size_t i = 1; i <= dim; ++i) {
            for (std::size_t k = 0; k < dim; ++k) {
                simplex[i].params[k] =
                    simplex[0].params[k] + 0.5 * (simplex[i].params[k] - simplex[0].params[k]);
            }
            if (!guarded(simplex[i].params, simplex[i].value)) return false;
        }
    }
}

// Deterministic coarse stage: every scanned point is recorded so the
// refinement can start from the five best cells (ties resolved by scan
// order, which is lexicographic for the lattice).
std::vector<std::vector<double>> scan_stage(SearchState& state, SettingSpace space,
                                            std::uint64_t seed, bool& completed) {
    std::vector<Candidate> scanned;
    completed = true;
    if (space == SettingSpace::Diag2) {
        const int cells = static_cast<int>(std::lround(2.0 * kBoxHalfWidth / kScanStep)) + 1;
        scanned.reserve(static_cast<std::size_t>(cells) * cells);
        for (int i = 0; i < cells && completed; ++i) {
            for (int j = 0; j < cells; ++j) {
                if (state.exhausted()) {
                    completed = false;
                    break;
                }
                std::vector<double> params = {-kBoxHalfWidth + kScanStep * i,
                                              -kBoxHalfWidth + kScanStep * j};
                scanned.push_back({params, state.evaluate(params)});
            }
        }
    } else {
        std::mt19937_64 rng(seed);
        scanned.reserve(kFullScanCount);
        for (std::int64_t s = 0; s < kFullScanCount; ++s) {
            std::vector<double> params(8);
            for (double& component : params) {
                component = -kBoxHalfWidth + 2.0 * kBoxHalfWidth * uniform_unit(rng);
            }
            if (state.exhausted()) {
                completed = false;
                break;
            }
            const double value = state.evaluate(params);
            scanned.push_back({std::move(params), value});
        }
    }

    std::vector<std::size_t> order(scanned.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&scanned](std::size_t a, std::size_t b) {
        return scanned[a].value < scanned[b].value;
    });
    std::vector<std::vector<double>> starts;
    for (std::size_t i = 0;
         i < order.size() && starts.size() < static_cast<std::size_t>(kRefinementStarts); ++i) {
        starts.push_back(scanned[order[i]].params);
    }
    return starts;
}

}  // namespace

BellSettings::BellSettings(SettingPair alpha, SettingPair alpha_prime, SettingPair beta,
                           SettingPair beta_prime)
    : alpha_(alpha), alpha_prime_(alpha_prime), beta_(beta), beta_prime_(beta_prime) {
    for (const SettingPair* pair : {&alpha_, &alpha_prime_, &beta_, &beta_prime_}) {
        check_component(pair->x);
        check_component(pair->p);
    }
}

BellSettings BellSettings::diagonal(double X, double PY) {
    return BellSettings({0.0, 0.0}, {X, 0.0}, {0.0, 0.0}, {0.0, PY});
}

double bell_kernel(const modes::BeamSpec& beam, const wigner::PhaseSpacePoint& pt) {
    const auto& terms = beam.terms();
    if (terms.size() == 1 && terms[0].mode.family == modes::ModeFamily::LG) {
        return wigner::displaced_parity_lg(terms[0].mode.m, terms[0].mode.n, pt);
    }
    return kPi * kPi * wigner::wigner_numeric(beam, pt);
}

double bell_sum(const modes::BeamSpec& beam, const BellSettings& settings) {
    const auto& a = settings.alpha();
    const auto& ap = settings.alpha_prime();
    const auto& b = settings.beta();
    const auto& bp = settings.beta_prime();
    return bell_kernel(beam, {a.x, a.p, b.x, b.p}) + bell_kernel(beam, {a.x, a.p, bp.x, bp.p}) +
           bell_kernel(beam, {ap.x, ap.p, b.x, b.p}) - bell_kernel(beam, {ap.x, ap.p, bp.x, bp.p});
}

double bell_sum_lg10_closed(double X, double PY) {
    return std::exp(-PY * PY) * (PY * PY - 1.0) + std::exp(-X * X) * (X * X - 1.0) -
           std::exp(-(PY * PY + X * X)) * ((PY + X) * (PY + X) - 1.0) - 1.0;
}

OptimizationResult optimize_settings(const modes::BeamSpec& beam, SettingSpace space,
                                     std::int64_t budget, std::uint64_t seed) {
    if (budget < 1) {
        throw std::invalid_argument("optimization budget must be at least 1 evaluation");
    }
    SearchState state(beam, space, budget);
    bool completed = false;
    const auto starts = scan_stage(state, space, seed, completed);
    bool converged = completed;
    for (const auto& start : starts) {
        if (!refine_simplex(state, start)) {
            converged = false;
            break;
        }
    }
    return {params_to_settings(space, state.best_params()), -state.best_value(),
            state.evaluations(), converged};
}

std::vector<std::pair<int, double>> violation_curve(int n_max, SettingSpace space) {
    if (n_max < 1 || n_max > 6) {
        throw std::invalid_argument("violation curve order must lie in 1..6, got " +
                                    std::to_string(n_max));
    }
    std::vector<std::pair<int, double>> curve;
    curve.reserve(n_max);
    for (int n = 1; n <= n_max; ++n) {
        const auto result =
            optimize_settings(modes::BeamSpec::single(modes::ModeIndex::lg(n, 0)), space);
        curve.emplace_back(n, result.bell_abs);
    }
    return curve;
}

}  // namespace vortexbell::bell

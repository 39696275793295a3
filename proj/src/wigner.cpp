#include "vortexbell/wigner.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vortexbell/errors.hpp"
#include "vortexbell/quadrature.hpp"
#include "vortexbell/schmidt.hpp"

namespace vortexbell::wigner {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMaxComponent = 10.0;
// A nonzero imaginary part of the assembled Wigner value can only come from
// rounding; anything larger signals a broken kernel table.
constexpr double kImagResidueTol = 1e-10;
constexpr int kLowOrder = 32;
constexpr int kHighOrder = 64;

struct HgTerm {
    complexd coefficient;
    int m;
    int n;
};

// Rewrites the beam as a pure HG superposition, merging repeated labels.
std::vector<HgTerm> expand_to_hg(const modes::BeamSpec& beam) {
    std::map<std::pair<int, int>, complexd> merged;
    for (const auto& term : beam.terms()) {
        if (term.mode.family == modes::ModeFamily::HG) {
            merged[{term.mode.m, term.mode.n}] += term.coefficient;
        } else {
            const auto expansion = schmidt::decompose(term.mode.m, term.mode.n);
            const int total = expansion.m + expansion.n;
            for (int k = 0; k <= total; ++k) {
                merged[{total - k, k}] += term.coefficient * expansion.coefficients[k];
            }
        }
    }
    std::vector<HgTerm> terms;
    terms.reserve(merged.size());
    for (const auto& [label, coefficient] : merged) {
        if (coefficient != complexd(0.0, 0.0)) {
            terms.push_back({coefficient, label.first, label.second});
        }
    }
    return terms;
}

int max_axis_order(const std::vector<HgTerm>& terms) {
    int top = 0;
    for (const auto& term : terms) {
        top = std::max({top, term.m, term.n});
    }
    return top;
}

// Amplitudes A_k = pi^{-1/4} (2^k k!)^{-1/2} of the oscillator functions.
std::vector<double> oscillator_amplitudes(int max_order) {
    std::vector<double> amp(max_order + 1);
    amp[0] = std::pow(kPi, -0.25);
    for (int k = 1; k <= max_order; ++k) {
        amp[k] = amp[k - 1] / std::sqrt(2.0 * k);
    }
    return amp;
}

// One-axis cross kernels K_{ab}(x, p) = (1/pi) int e^{2ipt} u_a(x+t) u_b(x-t) dt
// for every a, b up to max_order. Completing the square in the integrand,
//   e^{-t^2} e^{2ipt} = e^{-p^2} e^{-(t-ip)^2},
// and shifting the contour turns the integral into
//   K_{ab} = (A_a A_b / pi) e^{-x^2-p^2} int e^{-t^2} H_a(z+t) H_b(conj(z)-t) dt,
// z = x + ip. Hermite coefficients are real, so H_b(conj(z)-t) =
// conj(H_b(z-t)) and two tables of complex Hermite values cover both
// slots. The integrand is now a polynomial of degree a+b times the
// Gauss-Hermite weight, so the rule is exact (up to rounding) once
// 2*order-1 reaches a+b; the oscillatory phase never meets the
// quadrature nodes.
class CrossKernelTable {
  public:
    CrossKernelTable(double x, double p, int order, int max_order) : width_(max_order + 1) {
        const auto& rule = quadrature::gauss_hermite(order);
        sums_.assign(width_ * width_, complexd(0.0, 0.0));
        const complexd z(x, p);
        std::vector<complexd> hp(width_);
        std::vector<complexd> hm(width_);
        for (int i = 0; i < order; ++i) {
            fill_hermite(z + rule.nodes[i], max_order, hp);
            fill_hermite(z - rule.nodes[i], max_order, hm);
            const double w = rule.weights[i];
            for (int a = 0; a <= max_order; ++a) {
                for (int b = 0; b <= max_order; ++b) {
                    sums_[a * width_ + b] += w * hp[a] * std::conj(hm[b]);
                }
            }
        }
        const auto amp = oscillator_amplitudes(max_order);
        const double envelope = std::exp(-x * x - p * p) / kPi;
        for (int a = 0; a <= max_order; ++a) {
            for (int b = 0; b <= max_order; ++b) {
                sums_[a * width_ + b] *= envelope * amp[a] * amp[b];
            }
        }
    }

    complexd at(int a, int b) const { return sums_[a * width_ + b]; }

  private:
    static void fill_hermite(const complexd& arg, int max_order, std::vector<complexd>& h) {
        h[0] = complexd(1.0, 0.0);
        if (max_order >= 1) h[1] = 2.0 * arg;
        for (int k = 1; k < max_order; ++k) {
            h[k + 1] = 2.0 * (arg * h[k] - static_cast<double>(k) * h[k - 1]);
        }
    }

    int width_;
    std::vector<complexd> sums_;
};

double assemble_real(const complexd& value, const char* what) {
    if (std::abs(value.imag()) > kImagResidueTol) {
        throw QuadratureNotConvergedError(std::string(what) +
                                          ": imaginary residue " + std::to_string(value.imag()));
    }
    return value.real();
}

// Bilinear assembly sum_{jk} conj(c_j) c_k Kx(m_j, m_k) Ky(n_j, n_k).
complexd bilinear_sum(const std::vector<HgTerm>& terms, const CrossKernelTable& kx,
                      const CrossKernelTable& ky) {
    complexd total(0.0, 0.0);
    for (const auto& left : terms) {
        for (const auto& right : terms) {
            total += std::conj(left.coefficient) * right.coefficient *
                     kx.at(left.m, right.m) * ky.at(left.n, right.n);
        }
    }
    return total;
}

complexd wigner_at_order(const std::vector<HgTerm>& terms, int max_order,
                         const PhaseSpacePoint& pt, int order) {
    const CrossKernelTable kx(pt.X(), pt.PX(), order, max_order);
    const CrossKernelTable ky(pt.Y(), pt.PY(), order, max_order);
    return bilinear_sum(terms, kx, ky);
}

enum class MarginalAxis { Position, Momentum };

// Table of kernel integrals: over p at fixed position for the position
// marginal, over x at fixed momentum for the momentum one. In both cases
// the Gauss-Hermite weight of the outer variable is divided back out, and
// the unweighted integrand is again a polynomial, so nesting two rules of
// the same order keeps the result exact for orders up to 30.
std::vector<complexd> integrated_kernel(MarginalAxis axis, double fixed, int order,
                                        int max_order) {
    const int width = max_order + 1;
    std::vector<complexd> table(width * width, complexd(0.0, 0.0));
    const auto& rule = quadrature::gauss_hermite(order);
    for (int q = 0; q < order; ++q) {
        const double node = rule.nodes[q];
        const double unweighted = rule.weights[q] * std::exp(node * node);
        const CrossKernelTable kernels = axis == MarginalAxis::Position
                                             ? CrossKernelTable(fixed, node, order, max_order)
                                             : CrossKernelTable(node, fixed, order, max_order);
        for (int a = 0; a <= max_order; ++a) {
            for (int b = 0; b <= max_order; ++b) {
                table[a * width + b] += unweighted * kernels.at(a, b);
            }
        }
    }
    return table;
}

double marginal_at_order(const std::vector<HgTerm>& terms, int max_order, MarginalAxis axis,
                         double first, double second, int order) {
    const int width = max_order + 1;
    const auto mx = integrated_kernel(axis, first, order, max_order);
    const auto my = integrated_kernel(axis, second, order, max_order);
    complexd total(0.0, 0.0);
    for (const auto& left : terms) {
        for (const auto& right : terms) {
            total += std::conj(left.coefficient) * right.coefficient *
                     mx[left.m * width + right.m] * my[left.n * width + right.n];
        }
    }
    return assemble_real(total, "marginal");
}

double converged_pair(double low, double high, double tol, const char* what) {
    if (!(std::abs(high - low) <= tol)) {
        throw QuadratureNotConvergedError(std::string(what) + ": order " +
                                          std::to_string(kLowOrder) + " and " +
                                          std::to_string(kHighOrder) + " disagree by " +
                                          std::to_string(std::abs(high - low)));
    }
    return high;
}

void check_marginal_argument(double value, const char* name) {
    if (!std::isfinite(value) || std::abs(value) > kMaxComponent) {
        throw std::invalid_argument(std::string("marginal coordinate ") + name +
                                    " must be finite and at most 10 in magnitude");
    }
}

double marginal(const modes::BeamSpec& beam, MarginalAxis axis, double first, double second,
                double tol, const char* what) {
    check_marginal_argument(first, "first");
    check_marginal_argument(second, "second");
    const auto terms = expand_to_hg(beam);
    const int max_order = max_axis_order(terms);
    const double low = marginal_at_order(terms, max_order, axis, first, second, kLowOrder);
    const double high = marginal_at_order(terms, max_order, axis, first, second, kHighOrder);
    return converged_pair(low, high, tol, what);
}

}  // namespace

PhaseSpacePoint::PhaseSpacePoint(double X, double PX, double Y, double PY)
    : x_(X), px_(PX), y_(Y), py_(PY) {
    for (double component : {X, PX, Y, PY}) {
        if (!std::isfinite(component) || std::abs(component) > kMaxComponent) {
            throw std::invalid_argument(
                "phase-space components must be finite and at most 10 in magnitude");
        }
    }
}

double displaced_parity_lg(int m, int n, const PhaseSpacePoint& pt) {
    const double q0 = 0.25 * (pt.X() * pt.X() + pt.Y() * pt.Y() + pt.PX() * pt.PX() +
                              pt.PY() * pt.PY());
    const double q2 = 0.5 * (pt.X() * pt.PY() - pt.Y() * pt.PX());
    const double sign = ((m + n) % 2 == 0) ? 1.0 : -1.0;
    return sign * std::exp(-4.0 * q0) * modes::laguerre_poly(m, 0, 4.0 * (q0 + q2)) *
           modes::laguerre_poly(n, 0, 4.0 * (q0 - q2));
}

double wigner_lg(int m, int n, const PhaseSpacePoint& pt) {
    return displaced_parity_lg(m, n, pt) / (kPi * kPi);
}

double wigner_lg10_closed(const PhaseSpacePoint& pt) {
    const double radius2 = pt.X() * pt.X() + pt.PX() * pt.PX() + pt.Y() * pt.Y() +
                           pt.PY() * pt.PY();
    const double da = pt.PX() - pt.Y();
    const double db = pt.PY() + pt.X();
    return std::exp(-radius2) * (da * da + db * db - 1.0) / (kPi * kPi);
}

double wigner_numeric(const modes::BeamSpec& beam, const PhaseSpacePoint& pt, double tol) {
    const auto terms = expand_to_hg(beam);
    const int max_order = max_axis_order(terms);
    const double low =
        assemble_real(wigner_at_order(terms, max_order, pt, kLowOrder), "wigner");
    const double high =
        assemble_real(wigner_at_order(terms, max_order, pt, kHighOrder), "wigner");
    return converged_pair(low, high, tol, "wigner");
}

double marginal_x(const modes::BeamSpec& beam, double X, double Y, double tol) {
    return marginal(beam, MarginalAxis::Position, X, Y, tol, "position marginal");
}

double marginal_p(const modes::BeamSpec& beam, double PX, double PY, double tol) {
    return marginal(beam, MarginalAxis::Momentum, PX, PY, tol, "momentum marginal");
}

}  // namespace vortexbell::wigner

#include "vortexbell/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace vortexbell::quadrature {

namespace {

// Newton iteration on the orthonormal Hermite recurrence. Roots are found
// from the outside in; each pair of symmetric nodes shares one solve.
GaussHermiteRule build(int order) {
    constexpr double kEps = 1e-14;
    constexpr int kMaxIter = 64;
    const double pim4 = 0.7511255444649425;  // pi^{-1/4}

    GaussHermiteRule rule;
    rule.nodes.assign(order, 0.0);
    rule.weights.assign(order, 0.0);

    const int half = (order + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < half; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * order + 1.0) - 1.85575 * std::pow(2.0 * order + 1.0, -0.16667);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(order), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * rule.nodes[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * rule.nodes[1];
        } else {
            z = 2.0 * z - rule.nodes[i - 2];
        }
        double pp = 0.0;
        for (int iter = 0;; ++iter) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 0; j < order; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
                     std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * order) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) <= kEps) break;
            if (iter >= kMaxIter) throw std::runtime_error("gauss-hermite iteration stalled");
        }
        rule.nodes[i] = z;
        rule.nodes[order - 1 - i] = -z;
        rule.weights[i] = 2.0 / (pp * pp);
        rule.weights[order - 1 - i] = rule.weights[i];
    }
    if (order % 2 == 1) rule.nodes[half - 1] = 0.0;
    return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int order) {
    if (order < 1) throw std::invalid_argument("quadrature order must be positive");
    static std::map<int, GaussHermiteRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build(order)).first;
    return it->second;
}

}  // namespace vortexbell::quadrature

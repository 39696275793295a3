#pragma once

#include <vector>

namespace vortexbell::quadrature {

// Nodes and weights for integrals of the form int exp(-t^2) f(t) dt.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Rule of the given order, computed once and cached. Thread-safe.
const GaussHermiteRule& gauss_hermite(int order);

}  // namespace vortexbell::quadrature

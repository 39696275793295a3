#pragma once

#include <complex>
#include <vector>

#include "vortexbell/modes.hpp"

// Expansion of LG modes over the HG basis:
//   LG_{mn} = sum_{k=0}^{m+n} B_{mn}^k HG_{m+n-k, k}.
// The coefficients are evaluated from an exact integer polynomial
// expansion of (1-t)^m (1+t)^n, never by numerical differentiation.

namespace vortexbell::schmidt {

using modes::complexd;

struct SchmidtDecomposition {
    int m;
    int n;
    std::vector<complexd> coefficients;  // index k = 0 .. m+n
};

struct EntanglementSummary {
    double entropy;         // -sum_k lambda_k ln lambda_k, lambda_k = |B|^2
    double schmidt_number;  // 1 / sum_k lambda_k^2
};

// Single coefficient B_{mn}^k. Requires 0 <= k <= m+n and m+n <= 30.
complexd schmidt_coeff(int m, int n, int k);

SchmidtDecomposition decompose(int m, int n);

// The same expansion packaged as an HG-family beam; the coefficient vector
// is already unit-norm, so BeamSpec construction does not rescale it.
modes::BeamSpec decompose_lg(int m, int n);

EntanglementSummary schmidt_entropy(const SchmidtDecomposition& decomposition);

}  // namespace vortexbell::schmidt

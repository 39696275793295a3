#include "vortexbell/schmidt.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "vortexbell/errors.hpp"

namespace vortexbell::schmidt {

namespace {

constexpr int kMaxTotalOrder = 30;

std::int64_t binom64(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t out = 1;
    for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

// Coefficient of t^k in (1-t)^m (1+t)^n, by exact binomial convolution.
std::int64_t expansion_coeff(int m, int n, int k) {
    std::int64_t sum = 0;
    for (int j = std::max(0, k - n); j <= std::min(m, k); ++j) {
        const std::int64_t term = binom64(m, j) * binom64(n, k - j);
        sum += (j % 2 == 0) ? term : -term;
    }
    return sum;
}

complexd i_pow_minus(int k) {
    switch (k & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

}  // namespace

complexd schmidt_coeff(int m, int n, int k) {
    if (m < 0 || n < 0) throw IndexOutOfRangeError("mode indices must be non-negative");
    if (m + n > kMaxTotalOrder)
        throw OrderTooLargeError("total order exceeds supported order " +
                                 std::to_string(kMaxTotalOrder));
    if (k < 0 || k > m + n) throw IndexOutOfRangeError("coefficient index out of range");
    // sqrt(k!(m+n-k)!/(m!n!2^{m+n})) == sqrt(binom(m+n,m) / (binom(m+n,k) 2^{m+n})),
    // an exact integer ratio within the supported order range.
    const double ratio = static_cast<double>(binom64(m + n, m)) /
                         (static_cast<double>(binom64(m + n, k)) * std::ldexp(1.0, m + n));
    return i_pow_minus(k) * (std::sqrt(ratio) * static_cast<double>(expansion_coeff(m, n, k)));
}

SchmidtDecomposition decompose(int m, int n) {
    SchmidtDecomposition out{m, n, {}};
    out.coefficients.reserve(m + n + 1);
    for (int k = 0; k <= m + n; ++k) out.coefficients.push_back(schmidt_coeff(m, n, k));
    return out;
}

modes::BeamSpec decompose_lg(int m, int n) {
    const auto d = decompose(m, n);
    std::vector<modes::WeightedMode> terms;
    terms.reserve(d.coefficients.size());
    for (int k = 0; k <= m + n; ++k)
        terms.push_back({d.coefficients[k], modes::ModeIndex::hg(m + n - k, k)});
    return modes::BeamSpec(std::move(terms));
}

EntanglementSummary schmidt_entropy(const SchmidtDecomposition& decomposition) {
    double entropy = 0.0;
    double purity = 0.0;
    for (const auto& c : decomposition.coefficients) {
        const double lambda = std::norm(c);
        if (lambda > 0.0) entropy -= lambda * std::log(lambda);
        purity += lambda * lambda;
    }
    return {entropy, 1.0 / purity};
}

}  // namespace vortexbell::schmidt

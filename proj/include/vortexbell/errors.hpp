#pragma once

#include <stdexcept>
#include <string>

namespace vortexbell {

// Polynomial or mode order beyond the supported recurrence range.
struct OrderTooLargeError : std::invalid_argument {
    explicit OrderTooLargeError(const std::string& what) : std::invalid_argument(what) {}
};

struct IndexOutOfRangeError : std::out_of_range {
    explicit IndexOutOfRangeError(const std::string& what) : std::out_of_range(what) {}
};

// Two successive quadrature orders disagreed by more than the requested tolerance.
struct QuadratureNotConvergedError : std::runtime_error {
    explicit QuadratureNotConvergedError(const std::string& what) : std::runtime_error(what) {}
};

// A displacement would push non-negligible beam power off the sampling window.
struct DisplacementTooLargeError : std::runtime_error {
    explicit DisplacementTooLargeError(const std::string& what) : std::runtime_error(what) {}
};

struct GridMismatchError : std::invalid_argument {
    explicit GridMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

// A beam or a measured intensity could not be normalized.
struct NormalizationFailureError : std::runtime_error {
    explicit NormalizationFailureError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vortexbell

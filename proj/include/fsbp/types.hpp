#pragma once

#include <stdexcept>
#include <string>

namespace fsbp {

/// Closed interval [left, right] on the real line.
struct Interval {
    double left = -1.0;
    double right = 1.0;

    double length() const { return right - left; }
    bool contains(double x, double slack = 1e-12) const {
        return x >= left - slack && x <= right + slack;
    }
};

inline constexpr Interval kReferenceElement{-1.0, 1.0};

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operator construction failed (quadrature, exactness, rank). CLI exit 2.
struct ConstructionError : Error {
    using Error::Error;
};

/// A quadrature with the requested exactness has a nonpositive weight.
struct NonPositiveWeightsError : ConstructionError {
    using ConstructionError::ConstructionError;
};

/// The least-squares system for the weights did not reach the residual tolerance.
struct InexactQuadratureError : ConstructionError {
    using ConstructionError::ConstructionError;
};

/// File or config parsing failed. CLI exit 3.
struct ParseError : Error {
    using Error::Error;
};

/// A time integration produced a non-finite state. CLI exit 4.
struct DivergenceError : Error {
    DivergenceError(const std::string& what, double last_time, long step)
        : Error(what), last_finite_time(last_time), step_index(step) {}
    double last_finite_time = 0.0;
    long step_index = 0;
};

}  // namespace fsbp

#pragma once

#include <stdexcept>
#include <string>

namespace numeasure {

// Violated caller contract (bad arguments, malformed input).
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numerical routine could not deliver a trustworthy result.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Closed-form Hilbert evaluation requested inside the guarded band
// around a knot; callers switch to the quadrature fallback.
struct NearKnotEvaluation : NumericalError {
    explicit NearKnotEvaluation(double s)
        : NumericalError("near-knot evaluation at s = " + std::to_string(s)), point(s) {}
    double point;
};

// Tangent counting saw a root inside the guard annulus: the query point
// is too close to the singular set for an unambiguous integer.
struct AmbiguousNearSingularSet : NumericalError {
    using NumericalError::NumericalError;
};

// Input matrix has a numerical range with empty interior, so the planar
// density machinery does not apply.
struct QuasiHermitianInput : NumericalError {
    using NumericalError::NumericalError;
};

} // namespace numeasure

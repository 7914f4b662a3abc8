#pragma once

#include <stdexcept>
#include <string>

namespace qosc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// q = 1, q = -1, or a parameter inside a guard band around a singular locus.
class DegenerateParameter : public Error {
public:
    using Error::Error;
};

/// The branch integer l does not give positive-definite norms.
class ParityViolation : public Error {
public:
    using Error::Error;
};

/// Operation requested in the wrong deformation mode.
class ModeMismatch : public Error {
public:
    using Error::Error;
};

/// Constraint solve found no admissible involution.
class NoSolution : public Error {
public:
    using Error::Error;
};

/// Requested dimension exceeds the configured cap.
class DimensionTooLarge : public Error {
public:
    using Error::Error;
};

/// A symbolic element and a representation were built from different parameters.
class ParamMismatch : public Error {
public:
    using Error::Error;
};

} // namespace qosc

#pragma once

#include <stdexcept>
#include <string>

namespace dynball {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A point fed to a map or metric lies outside the map's domain.
struct DomainViolation : Error { using Error::Error; };

// A derivative was requested where none exists (or none was provided).
struct NotDifferentiable : Error { using Error::Error; };

// Two points are too close for the divergence ratio to carry signal.
struct DegenerateSeparation : Error { using Error::Error; };

// No candidate stayed inside the dynamical ball.
struct EmptyCandidateSet : Error { using Error::Error; };

// The positivity gate for the splitting estimator failed.
struct NoHyperbolicity : Error { using Error::Error; };

// Disc family placement could not keep the discs disjoint / contained.
struct DiscOverlap : Error { using Error::Error; };

// A disc-family base map is not the identity on the unit-disc boundary.
struct BoundaryMismatch : Error { using Error::Error; };

// The measured mean exponent of a disc base map is too small to be useful.
struct BaseMapNotChaotic : Error { using Error::Error; };

// An integral over an infinite-area domain was requested.
struct UnboundedDomain : Error { using Error::Error; };

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_number(line) {}
    int line_number;
};

}  // namespace dynball

#pragma once

#include <stdexcept>
#include <string>

namespace dislab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation requested at (or too close to) a dislocation position.
struct SingularPointError : Error { using Error::Error; };
// Admissibility violations of a dislocation system.
struct CoreOverlapError : Error { using Error::Error; };
struct BoundaryContactError : Error { using Error::Error; };
struct OutsideDomainError : Error { using Error::Error; };
// Backend routing.
struct WrongBackendError : Error { using Error::Error; };
// Numerics.
struct QuadratureFailureError : Error { using Error::Error; };
struct SolverFailureError : Error { using Error::Error; };
struct MeshFailureError : Error { using Error::Error; };
struct BadCutRadiusError : Error { using Error::Error; };
struct InadmissiblePerturbationError : Error { using Error::Error; };
struct StepCollapseError : Error { using Error::Error; };
// CLI / config.
struct ConfigError : Error { using Error::Error; };

}  // namespace dislab

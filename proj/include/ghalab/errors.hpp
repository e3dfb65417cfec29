#pragma once

#include <stdexcept>
#include <string>

namespace ghalab {

// All library failures derive from Error so callers (the CLI) can catch once.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ArgumentError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };        // label outside admissible range
struct RegimeError : Error { using Error::Error; };        // energy outside the bound regime
struct ConsistencyError : Error { using Error::Error; };   // off-shell phase point
struct StencilError : Error { using Error::Error; };       // finite-difference stencil leaves the domain
struct DimensionError : Error { using Error::Error; };
struct UnsupportedError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
struct SingularityError : Error { using Error::Error; };
struct DegenerateNormalizationError : Error { using Error::Error; };
struct TheoremViolation : Error { using Error::Error; };

}  // namespace ghalab

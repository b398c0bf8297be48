#pragma once

#include <stdexcept>
#include <string>

namespace mapfr {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// exact number layer
struct ParseError : Error { using Error::Error; };
struct NonFiniteError : Error { using Error::Error; };

// instance / plan structure
struct InvalidInstance : Error { using Error::Error; };
struct InvalidPlan : Error { using Error::Error; };

// collision layer
struct NoConflictError : Error { using Error::Error; };

// shortest paths
struct UnreachableError : Error { using Error::Error; };

// smt adapter
struct ScopeUnderflow : Error { using Error::Error; };
struct MalformedModel : Error { using Error::Error; };
struct BackendError : Error { using Error::Error; };

// encoder / planner misuse
struct ScopeMisuse : Error { using Error::Error; };
struct DegenerateClause : Error { using Error::Error; };
struct InternalError : Error { using Error::Error; };

// solve outcomes surfaced as errors
struct Infeasible : Error { using Error::Error; };

// validator
struct StructuralError : Error { using Error::Error; };
struct NoOverlapError : Error { using Error::Error; };
struct TooLargeError : Error { using Error::Error; };

// generators / ingest
struct OvercrowdedError : Error { using Error::Error; };
struct TooManyAgentsError : Error { using Error::Error; };
struct BlockedEndpointError : Error { using Error::Error; };

}  // namespace mapfr

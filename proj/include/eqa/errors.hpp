#pragma once

#include <stdexcept>
#include <string>

namespace eqa {

// Base for all engine errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// worldsim
struct InfeasibleParams : Error { using Error::Error; };

// mapping
struct DimensionMismatch : Error { using Error::Error; };
struct Unreachable : Error { using Error::Error; };

// scenegraph
struct InconsistentRoomPartition : Error { using Error::Error; };

// enrichment
struct LabelerFailure : Error { using Error::Error; };

// memory
struct EmptyQuestion : Error { using Error::Error; };

// planner protocol
struct SchemaError : Error { using Error::Error; };
struct UnknownNode : Error { using Error::Error; };
struct HierarchyViolation : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct UnplacedAgent : Error { using Error::Error; };
struct NoFrontier : Error { using Error::Error; };

// remote transport
struct Timeout : Error { using Error::Error; };
struct TransportError : Error { using Error::Error; };
struct RetriesExhausted : Error { using Error::Error; };

// episode
struct StaleNode : Error { using Error::Error; };
struct PlannerError : Error { using Error::Error; };

}  // namespace eqa

#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace streamcut {

/// Opaque identifier of a streamed point. Distinct stream elements carry
/// distinct ids even when they share a location (multiset semantics); the
/// metric backends map ids to rows/coordinates internally.
struct PointId {
    std::uint64_t value = 0;

    friend bool operator==(PointId a, PointId b) { return a.value == b.value; }
    friend bool operator!=(PointId a, PointId b) { return a.value != b.value; }
    friend bool operator<(PointId a, PointId b) { return a.value < b.value; }
};

enum class EventKind { Insert, Delete };

struct StreamEvent {
    EventKind kind = EventKind::Insert;
    PointId point;
    std::uint64_t timestamp = 0;  // 1-based position in the stream
};

// Error taxonomy. The CLI maps these to exit codes:
// usage 2, ValidationError 3, QueryOnUnseenId 4.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Distance query for an id that is invalid or has not appeared in the
/// stream. Under the oracle model this is a hard failure, not a recoverable
/// condition.
struct QueryOnUnseenId : std::runtime_error {
    explicit QueryOnUnseenId(PointId id)
        : std::runtime_error("distance query on unseen or invalid id " +
                             std::to_string(id.value)),
          id(id) {}
    PointId id;
};

struct InstanceTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyStream : std::runtime_error {
    EmptyStream() : std::runtime_error("no events ingested") {}
};

struct CapacityExceeded : ValidationError {
    using ValidationError::ValidationError;
};

}  // namespace streamcut

template <>
struct std::hash<streamcut::PointId> {
    std::size_t operator()(streamcut::PointId p) const noexcept {
        return std::hash<std::uint64_t>{}(p.value);
    }
};

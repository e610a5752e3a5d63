#pragma once

// Keystroke-level edit logs: file snapshots, edit deltas, and replay.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "smartpaste/errors.hpp"

namespace smartpaste {

using Timestamp = std::int64_t;  // milliseconds since epoch

enum class Provenance { Internal, ThirdParty, Unknown };

struct FileSnapshot {
  std::string journey_id;
  std::string file_path;
  std::string language;
  Timestamp timestamp = 0;
  std::string content;
};

// Offsets and lengths count Unicode scalar values, not bytes.
struct EditDelta {
  std::string journey_id;
  Timestamp timestamp = 0;
  std::size_t start_offset = 0;
  std::size_t deleted_length = 0;
  std::string inserted_text;
};

using JourneyEvent = std::variant<FileSnapshot, EditDelta>;

struct EditJourney {
  std::string journey_id;
  std::string file_path;
  std::string language;
  Provenance provenance = Provenance::Unknown;
  std::vector<JourneyEvent> events;
};

class MalformedJourney : public Error {
 public:
  using Error::Error;
};

// RangeOutOfBounds raised while replaying a specific journey event.
class DeltaOutOfRange : public RangeOutOfBounds {
 public:
  DeltaOutOfRange(std::size_t event_index, const std::string& what)
      : RangeOutOfBounds("event " + std::to_string(event_index) + ": " + what),
        event_index_(event_index) {}
  std::size_t event_index() const noexcept { return event_index_; }

 private:
  std::size_t event_index_;
};

// A delta resolved against concrete content: byte range to replace.
struct ResolvedDelta {
  std::size_t begin = 0;  // byte offset
  std::size_t end = 0;    // byte offset, exclusive
};

ResolvedDelta resolve_delta(std::string_view content, const EditDelta& delta);

std::string apply_delta(std::string_view content, const EditDelta& delta);

// Content after replaying events [0, upto].
std::string reconstruct(const EditJourney& journey, std::size_t upto);

enum class ViolationKind {
  FirstEventNotSnapshot,
  OutOfOrder,
  NoOpDelta,
  DeltaOutOfRange,
  SnapshotMismatch,
};

struct Violation {
  std::size_t event_index = 0;
  ViolationKind kind{};
  friend bool operator==(const Violation&, const Violation&) = default;
};

const char* to_string(ViolationKind kind);

// Replays the whole journey and reports every inconsistency. Bad deltas are
// skipped and mismatching snapshots do not reset replay, so one corruption
// yields one violation.
std::vector<Violation> validate_journey(const EditJourney& journey);

Timestamp timestamp_of(const JourneyEvent& event);

struct JourneyIngest {
  std::vector<EditJourney> journeys;
  std::size_t malformed_lines = 0;
};

// Reads newline-delimited snapshot/delta records and groups them into
// journeys, in order of first appearance. Events are stably sorted by
// timestamp and line endings are normalized to "\n".
JourneyIngest ingest_journeys(std::istream& in);

}  // namespace smartpaste

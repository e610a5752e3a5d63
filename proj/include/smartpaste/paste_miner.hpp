#pragma once

// Finds paste candidates in edit journeys and follows the edits that fix
// them, producing labeled paste-and-fix examples.

#include <cstddef>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "smartpaste/edit_journal.hpp"

namespace smartpaste {

// Inclusive 0-based line range.
struct PasteRegion {
  std::size_t start_line = 0;
  std::size_t end_line = 0;

  std::size_t size() const { return end_line - start_line + 1; }
  bool contains(std::size_t line) const { return line >= start_line && line <= end_line; }
  friend bool operator==(const PasteRegion&, const PasteRegion&) = default;
};

// Throws InvalidArgument when start_line > end_line.
PasteRegion make_region(std::size_t start_line, std::size_t end_line);

struct PasteCandidate {
  std::string journey_id;
  std::size_t event_index = 0;
  PasteRegion region;
  std::string pasted_text;
  std::string file_before;
  std::string file_after_paste;
  Timestamp timestamp = 0;
};

struct MinerConfig {
  std::size_t min_candidate_chars = 10;
  std::size_t max_candidate_lines = 5;
  // language -> line patterns (ECMAScript regex, matched with regex_search)
  std::map<std::string, std::vector<std::string>> import_patterns = default_import_patterns();
  std::optional<Timestamp> idle_cutoff;

  static std::map<std::string, std::vector<std::string>> default_import_patterns();
  void validate() const;
};

enum class Label { Edit, NoEdit };

struct PasteFixExample {
  std::string journey_id;
  std::string language;
  std::string file_path;
  std::string file_after_paste;
  PasteRegion region;
  std::string pasted_text;
  std::string fixed_region_text;
  Label label = Label::NoEdit;
  Timestamp created_at = 0;
  std::size_t char_length = 0;
  Provenance provenance = Provenance::Unknown;
};

class RegionDestroyed : public Error {
 public:
  using Error::Error;
};

// Lines [start_line, end_line] of `content`, joined with "\n".
std::string region_text(std::string_view content, const PasteRegion& region);

// Non-empty means "contains a non-whitespace character".
std::size_t count_nonempty_lines(std::string_view s);

// Region occupied by text inserted at byte `begin` of `content_after`.
// Returns nullopt when the inserted text is only newlines.
std::optional<PasteRegion> inserted_region(std::string_view content_after, std::size_t begin,
                                           std::string_view inserted);

bool is_paste_like(const EditDelta& delta, const MinerConfig& config);

std::vector<PasteCandidate> detect_paste_candidates(const EditJourney& journey,
                                                    const MinerConfig& config);

// Region covering the same logical block after `delta` is applied to
// `content`. Throws RegionDestroyed when the delta deletes the whole region.
PasteRegion adjust_region(const PasteRegion& region, const EditDelta& delta,
                          std::string_view content);

enum class TrackOutcome { Emitted, FullDeletion };

struct TrackResult {
  TrackOutcome outcome = TrackOutcome::Emitted;
  std::optional<PasteFixExample> example;
  std::size_t related_edits = 0;
};

TrackResult track_fix(const EditJourney& journey, const PasteCandidate& candidate,
                      const MinerConfig& config);

struct MiningStats {
  std::size_t journeys = 0;
  std::size_t failed_journeys = 0;
  std::size_t candidates = 0;
  std::size_t edit_examples = 0;
  std::size_t no_edit_examples = 0;
  std::size_t discarded = 0;

  MiningStats& operator+=(const MiningStats& o);
  friend bool operator==(const MiningStats&, const MiningStats&) = default;
};

struct MiningResult {
  std::vector<PasteFixExample> examples;
  MiningStats stats;
};

MiningResult mine_journey(const EditJourney& journey, const MinerConfig& config);

// Output order follows input order regardless of `threads`.
MiningResult mine(const std::vector<EditJourney>& journeys, const MinerConfig& config,
                  unsigned threads = 1);

const char* to_string(Label label);
const char* to_string(Provenance provenance);

}  // namespace smartpaste

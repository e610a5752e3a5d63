#pragma once

// Prompt encoding and the delimiter-anchored patch format.
//
// Patch wire form, one block per hunk:
//
//   @@ <start> @@\n
//   -<removed line>\n   (zero or more)
//   +<added line>\n     (zero or more)
//
// <start> is a 0-based decimal offset from the first pasted line. The empty
// string is the no-edit patch.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "smartpaste/context_builder.hpp"
#include "smartpaste/paste_miner.hpp"

namespace smartpaste {

struct CodecConfig {
  std::string open_delimiter = "<|paste_start|>";
  std::string close_delimiter = "<|paste_end|>";
  std::string fix_marker = "<|fix|>";
  std::string gap_marker = std::string(kDefaultGapMarker);
  std::string task_verb = "paste";
};

struct Hunk {
  std::size_t start = 0;
  std::vector<std::string> removed;
  std::vector<std::string> added;
  friend bool operator==(const Hunk&, const Hunk&) = default;
};

struct EditPatch {
  std::vector<Hunk> hunks;

  bool is_no_edit() const { return hunks.empty(); }
  friend bool operator==(const EditPatch&, const EditPatch&) = default;
};

class PatchError : public Error {
 public:
  enum class Kind {
    MalformedHunkHeader,
    UnknownLinePrefix,
    MisorderedHunkLines,
    EmptyHunk,
    OverlappingHunks,
    ContextMismatch,
    HunkOutOfRange,
  };

  PatchError(Kind kind, std::size_t where, const std::string& detail);

  Kind kind() const noexcept { return kind_; }
  // Hunk index for apply errors, 1-based line number for parse errors.
  std::size_t where() const noexcept { return where_; }

 private:
  Kind kind_;
  std::size_t where_;
};

const char* to_string(PatchError::Kind kind);

class DelimiterCollision : public Error {
 public:
  using Error::Error;
};

struct PromptParts {
  std::string task_prefix;
  std::vector<std::string> pre_context;
  std::vector<std::string> pasted_lines;
  std::vector<std::string> post_context;
};

// Splits the prompt sections out of `file_lines`. Throws DelimiterCollision
// if a pasted line contains any delimiter or marker token.
PromptParts prompt_parts(std::string_view file_path, const std::vector<std::string>& file_lines,
                         const PasteRegion& region, const ContextSelection& selection,
                         const CodecConfig& config = {});

std::string render_prompt(const PromptParts& parts, const CodecConfig& config = {});

std::string encode_prompt(const PasteFixExample& example, const ContextSelection& selection,
                          const CodecConfig& config = {});

// Throws PatchError (EmptyHunk, OverlappingHunks) on a broken invariant.
void validate_patch(const EditPatch& patch);

std::string render_patch(const EditPatch& patch);
EditPatch parse_patch(std::string_view text);

std::vector<std::string> apply_patch(const std::vector<std::string>& pasted_lines,
                                     const EditPatch& patch);

// Minimal line diff (longest common subsequence).
EditPatch diff_region(const std::vector<std::string>& before, const std::vector<std::string>& after);

}  // namespace smartpaste

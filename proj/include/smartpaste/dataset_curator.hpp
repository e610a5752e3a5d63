#pragma once

// Quality filters, language weighting, and training batch assembly.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smartpaste/paste_miner.hpp"

namespace smartpaste {

inline constexpr Timestamp kMillisPerDay = 24LL * 60 * 60 * 1000;

struct CurationPolicy {
  std::size_t max_paste_lines = 20;
  std::size_t max_example_chars = 50000;
  std::size_t max_age_days = 120;
  std::set<Provenance> allowed_provenance{Provenance::Internal};

  void validate() const;
};

enum class RejectReason { DisallowedProvenance, TooOld, TooManyPasteLines, TooLarge };

const char* to_string(RejectReason reason);

// nullopt means Keep. Criteria are checked in the order of RejectReason and
// the first violation wins.
std::optional<RejectReason> filter_example(const PasteFixExample& example,
                                           const CurationPolicy& policy, Timestamp now);

// Lines in the pasted snippet; a trailing newline does not open a new line.
std::size_t paste_line_count(std::string_view pasted_text);

using LanguageWeights = std::map<std::string, double>;

// Normalized weights proportional to `observed_frequencies`. Languages that
// appear in `examples` but not in the map get weight 0.
LanguageWeights weight_languages(const std::vector<PasteFixExample>& examples,
                                 const std::map<std::string, double>& observed_frequencies);

struct Batch {
  std::vector<PasteFixExample> examples;
  std::size_t size = 0;          // target size
  std::size_t no_edit_quota = 0;
  std::size_t shortfall = 0;     // slots filled from the other label, or left empty

  bool full() const { return examples.size() == size && shortfall == 0; }
  std::size_t no_edit_count() const;
};

// round(batch_size * fraction), halves rounded up.
std::size_t no_edit_quota(std::size_t batch_size, double no_edit_fraction);

// Draws NoEdit and Edit examples without replacement, choosing the language
// of each draw by weight. Examples of zero-weight languages are never drawn.
// Deterministic in (examples, batch_size, fraction, weights, seed).
std::vector<Batch> build_batches(const std::vector<PasteFixExample>& examples,
                                 std::size_t batch_size, double no_edit_fraction,
                                 const LanguageWeights& weights, std::uint64_t seed);

struct DatasetSplit {
  std::vector<PasteFixExample> train;
  std::vector<PasteFixExample> validation;
};

// Assigns whole files to one side so no file path appears in both.
DatasetSplit split_by_file_path(const std::vector<PasteFixExample>& examples,
                                double validation_fraction, std::uint64_t seed);

}  // namespace smartpaste

#pragma once

// Online telemetry and offline test-set metrics. Character counts are in
// Unicode scalar values.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smartpaste/paste_miner.hpp"

namespace smartpaste {

inline constexpr std::size_t kDefaultLcsWorkCap = 100'000'000;

class InputTooLarge : public Error {
 public:
  using Error::Error;
};

std::size_t lcs_length(std::u32string_view a, std::u32string_view b,
                       std::size_t work_cap = kDefaultLcsWorkCap);
std::size_t lcs_length(std::string_view a, std::string_view b,
                       std::size_t work_cap = kDefaultLcsWorkCap);

// Characters of `after` left unmatched by the LCS alignment with `before`,
// in order. The alignment walks both strings front to back, matching equal
// characters and otherwise dropping from `before` when that keeps the LCS
// length.
std::u32string added_characters(std::u32string_view before, std::u32string_view after,
                                std::size_t work_cap = kDefaultLcsWorkCap);

std::size_t chars_modified(std::string_view before, std::string_view after,
                           std::size_t work_cap = kDefaultLcsWorkCap);
std::size_t chars_added(std::string_view before, std::string_view after,
                        std::size_t work_cap = kDefaultLcsWorkCap);

enum class EventKind { Shown, Accepted, Dismissed };

const char* to_string(EventKind kind);

struct SuggestionEvent {
  std::string event_id;
  std::string request_id;
  EventKind kind = EventKind::Shown;
  Timestamp timestamp = 0;
  PasteRegion region;
  std::string before_text;
  std::optional<std::string> after_text;  // Accepted only
  double latency_ms = 0.0;
  // Region text a fixed interval after acceptance, when known.
  std::optional<std::string> later_text;
};

// Fraction of the accepted suggestion's added characters still present in
// `later_region_text`. 1.0 when nothing was added.
double survival(const SuggestionEvent& accepted, std::string_view later_region_text);

double acceptance_rate(const std::vector<SuggestionEvent>& events);

struct OnlineReport {
  std::size_t shown = 0;
  std::size_t accepted = 0;
  std::size_t dismissed = 0;
  double acceptance_rate = 0.0;
  std::optional<double> avg_chars_modified;
  std::optional<double> avg_chars_added;
  std::optional<double> mean_survival;
  std::optional<double> median_latency_ms;
  std::optional<double> throughput_qps;  // shown events over the observed span
};

OnlineReport online_report(const std::vector<SuggestionEvent>& events);

struct EvalRecord {
  std::string example_id;
  std::string language;
  std::vector<std::string> predicted_region;
  std::vector<std::string> ground_truth_region;
  Label ground_truth_label = Label::Edit;
  bool predicted_nonempty = false;
};

bool exact_match(const EvalRecord& record);

// Character n-gram F-score on a 0..100 scale.
double chrf(std::string_view hypothesis, std::string_view reference, std::size_t max_n = 6,
            double beta = 2.0);

struct MetricRow {
  std::size_t records = 0;
  std::size_t edit_records = 0;
  std::size_t no_edit_records = 0;
  std::optional<double> edit_exact_match;     // percent
  std::optional<double> no_edit_exact_match;  // percent
  std::optional<double> overall_exact_match;  // percent
  std::optional<double> recall;               // percent
  std::optional<double> median_chrf;          // over non-exact records
};

struct OfflineReport {
  std::map<std::string, MetricRow> per_language;
  MetricRow overall;
};

OfflineReport offline_report(const std::vector<EvalRecord>& records);

std::optional<double> median(std::vector<double> values);

}  // namespace smartpaste

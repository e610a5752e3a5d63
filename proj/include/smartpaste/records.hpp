#pragma once

// JSON forms of the newline-delimited record formats.

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "smartpaste/dataset_curator.hpp"
#include "smartpaste/eval_metrics.hpp"
#include "smartpaste/paste_miner.hpp"

namespace smartpaste {

using json = nlohmann::json;

Label parse_label(const std::string& s);
Provenance parse_provenance(const std::string& s);
EventKind parse_event_kind(const std::string& s);

void to_json(json& j, const PasteRegion& r);
void from_json(const json& j, PasteRegion& r);

void to_json(json& j, const PasteFixExample& e);
void from_json(const json& j, PasteFixExample& e);

void to_json(json& j, const SuggestionEvent& e);
void from_json(const json& j, SuggestionEvent& e);

void to_json(json& j, const EvalRecord& r);
void from_json(const json& j, EvalRecord& r);

void to_json(json& j, const MiningStats& s);
void to_json(json& j, const MetricRow& r);
void to_json(json& j, const OfflineReport& r);
void to_json(json& j, const OnlineReport& r);

void to_json(json& j, const CurationPolicy& p);
void from_json(const json& j, CurationPolicy& p);

void from_json(const json& j, MinerConfig& c);

// Stable identifier for an example: journey id plus region.
std::string example_id(const PasteFixExample& e);

template <typename T>
struct NdjsonRead {
  std::vector<T> records;
  std::size_t malformed_lines = 0;
  std::vector<json> other;  // well-formed lines of another record kind
};

// Lines whose "kind" differs from `kind` (when present) are collected in
// `other`; lines that fail to parse are counted.
NdjsonRead<PasteFixExample> read_examples(std::istream& in);
NdjsonRead<SuggestionEvent> read_events(std::istream& in);

// Table with one row per language and Edit / No-Edit / Overall columns.
std::string format_offline_table(const OfflineReport& report);
std::string format_online_report(const OnlineReport& report);

}  // namespace smartpaste

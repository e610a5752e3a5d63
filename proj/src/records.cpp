#include "smartpaste/records.hpp"

#include <cstdio>
#include <istream>
#include <sstream>

#include "smartpaste/text.hpp"

namespace smartpaste {

namespace {

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string checked_string(const json& j, const char* key) {
  auto s = j.at(key).get<std::string>();
  if (!text::is_valid_utf8(s)) throw InvalidText(std::string("invalid UTF-8 in ") + key);
  return s;
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return checked_string(j, key);
}

}  // namespace

Label parse_label(const std::string& s) {
  if (s == "Edit") return Label::Edit;
  if (s == "NoEdit") return Label::NoEdit;
  throw InvalidArgument("unknown label " + s);
}

Provenance parse_provenance(const std::string& s) {
  if (s == "Internal") return Provenance::Internal;
  if (s == "ThirdParty") return Provenance::ThirdParty;
  if (s == "Unknown") return Provenance::Unknown;
  throw InvalidArgument("unknown provenance " + s);
}

EventKind parse_event_kind(const std::string& s) {
  if (s == "Shown") return EventKind::Shown;
  if (s == "Accepted") return EventKind::Accepted;
  if (s == "Dismissed") return EventKind::Dismissed;
  throw InvalidArgument("unknown event kind " + s);
}

void to_json(json& j, const PasteRegion& r) {
  j = json{{"start_line", r.start_line}, {"end_line", r.end_line}};
}

void from_json(const json& j, PasteRegion& r) {
  r = make_region(j.at("start_line").get<std::size_t>(), j.at("end_line").get<std::size_t>());
}

void to_json(json& j, const PasteFixExample& e) {
  j = json{{"kind", "example"},
           {"journey_id", e.journey_id},
           {"language", e.language},
           {"file_path", e.file_path},
           {"file_after_paste", e.file_after_paste},
           {"region", e.region},
           {"pasted_text", e.pasted_text},
           {"fixed_region_text", e.fixed_region_text},
           {"label", to_string(e.label)},
           {"created_at", e.created_at},
           {"char_length", e.char_length},
           {"provenance", to_string(e.provenance)}};
}

void from_json(const json& j, PasteFixExample& e) {
  e.journey_id = j.at("journey_id").get<std::string>();
  e.language = j.at("language").get<std::string>();
  e.file_path = j.at("file_path").get<std::string>();
  e.file_after_paste = checked_string(j, "file_after_paste");
  e.region = j.at("region").get<PasteRegion>();
  e.pasted_text = checked_string(j, "pasted_text");
  e.fixed_region_text = checked_string(j, "fixed_region_text");
  e.label = parse_label(j.at("label").get<std::string>());
  e.created_at = j.at("created_at").get<Timestamp>();
  e.char_length = j.contains("char_length")
                      ? j["char_length"].get<std::size_t>()
                      : text::length(e.file_after_paste) + text::length(e.fixed_region_text);
  e.provenance = j.contains("provenance") && !j["provenance"].is_null()
                     ? parse_provenance(j["provenance"].get<std::string>())
                     : Provenance::Unknown;
}

void to_json(json& j, const SuggestionEvent& e) {
  j = json{{"event_id", e.event_id},
           {"request_id", e.request_id},
           {"kind", to_string(e.kind)},
           {"timestamp", e.timestamp},
           {"region", e.region},
           {"before_text", e.before_text},
           {"after_text", optional_json(e.after_text)},
           {"latency_ms", e.latency_ms}};
  if (e.later_text) j["later_text"] = *e.later_text;
}

void from_json(const json& j, SuggestionEvent& e) {
  e.event_id = j.at("event_id").get<std::string>();
  e.request_id = j.at("request_id").get<std::string>();
  e.kind = parse_event_kind(j.at("kind").get<std::string>());
  e.timestamp = j.at("timestamp").get<Timestamp>();
  e.region = j.at("region").get<PasteRegion>();
  e.before_text = checked_string(j, "before_text");
  e.after_text = optional_string(j, "after_text");
  e.latency_ms = j.value("latency_ms", 0.0);
  e.later_text = optional_string(j, "later_text");
  if ((e.kind == EventKind::Accepted) != e.after_text.has_value()) {
    throw InvalidArgument("after_text must be present exactly for Accepted events");
  }
}

void to_json(json& j, const EvalRecord& r) {
  j = json{{"example_id", r.example_id},
           {"language", r.language},
           {"predicted_region", r.predicted_region},
           {"ground_truth_region", r.ground_truth_region},
           {"ground_truth_label", to_string(r.ground_truth_label)},
           {"predicted_nonempty", r.predicted_nonempty}};
}

void from_json(const json& j, EvalRecord& r) {
  r.example_id = j.at("example_id").get<std::string>();
  r.language = j.at("language").get<std::string>();
  r.predicted_region = j.at("predicted_region").get<std::vector<std::string>>();
  r.ground_truth_region = j.at("ground_truth_region").get<std::vector<std::string>>();
  r.ground_truth_label = parse_label(j.at("ground_truth_label").get<std::string>());
  r.predicted_nonempty = j.at("predicted_nonempty").get<bool>();
}

void to_json(json& j, const MiningStats& s) {
  j = json{{"kind", "mining_stats"},
           {"journeys", s.journeys},
           {"failed_journeys", s.failed_journeys},
           {"candidates", s.candidates},
           {"edit_examples", s.edit_examples},
           {"no_edit_examples", s.no_edit_examples},
           {"discarded", s.discarded}};
}

void to_json(json& j, const MetricRow& r) {
  j = json{{"records", r.records},
           {"edit_records", r.edit_records},
           {"no_edit_records", r.no_edit_records},
           {"edit_exact_match", optional_json(r.edit_exact_match)},
           {"no_edit_exact_match", optional_json(r.no_edit_exact_match)},
           {"overall_exact_match", optional_json(r.overall_exact_match)},
           {"recall", optional_json(r.recall)},
           {"median_chrf", optional_json(r.median_chrf)}};
}

void to_json(json& j, const OfflineReport& r) {
  json langs = json::object();
  for (const auto& [lang, row] : r.per_language) langs[lang] = row;
  j = json{{"kind", "offline_report"}, {"per_language", langs}, {"overall", r.overall}};
}

void to_json(json& j, const OnlineReport& r) {
  j = json{{"kind", "online_report"},
           {"shown", r.shown},
           {"accepted", r.accepted},
           {"dismissed", r.dismissed},
           {"acceptance_rate", r.acceptance_rate},
           {"avg_chars_modified", optional_json(r.avg_chars_modified)},
           {"avg_chars_added", optional_json(r.avg_chars_added)},
           {"mean_survival", optional_json(r.mean_survival)},
           {"median_latency_ms", optional_json(r.median_latency_ms)},
           {"throughput_qps", optional_json(r.throughput_qps)}};
}

void to_json(json& j, const CurationPolicy& p) {
  std::vector<std::string> allowed;
  for (auto v : p.allowed_provenance) allowed.emplace_back(to_string(v));
  j = json{{"max_paste_lines", p.max_paste_lines},
           {"max_example_chars", p.max_example_chars},
           {"max_age_days", p.max_age_days},
           {"allowed_provenance", allowed}};
}

void from_json(const json& j, CurationPolicy& p) {
  p.max_paste_lines = j.value("max_paste_lines", p.max_paste_lines);
  p.max_example_chars = j.value("max_example_chars", p.max_example_chars);
  p.max_age_days = j.value("max_age_days", p.max_age_days);
  if (j.contains("allowed_provenance")) {
    p.allowed_provenance.clear();
    for (const auto& v : j["allowed_provenance"]) {
      p.allowed_provenance.insert(parse_provenance(v.get<std::string>()));
    }
  }
  p.validate();
}

void from_json(const json& j, MinerConfig& c) {
  c.min_candidate_chars = j.value("min_candidate_chars", c.min_candidate_chars);
  c.max_candidate_lines = j.value("max_candidate_lines", c.max_candidate_lines);
  if (j.contains("import_patterns")) {
    for (const auto& [lang, patterns] : j["import_patterns"].items()) {
      c.import_patterns[lang] = patterns.get<std::vector<std::string>>();
    }
  }
  if (j.contains("idle_cutoff") && !j["idle_cutoff"].is_null()) {
    c.idle_cutoff = j["idle_cutoff"].get<Timestamp>();
  }
  c.validate();
}

std::string example_id(const PasteFixExample& e) {
  return e.journey_id + ":" + std::to_string(e.region.start_line) + "-" +
         std::to_string(e.region.end_line) + "@" + std::to_string(e.created_at);
}

namespace {

template <typename T>
NdjsonRead<T> read_ndjson(std::istream& in, std::string_view kind) {
  NdjsonRead<T> out;
  std::string line;
  while (std::getline(in, line)) {
    if (text::is_blank(line)) continue;
    try {
      auto j = json::parse(line);
      if (j.contains("kind") && j["kind"].is_string() && j["kind"].get<std::string>() != kind &&
          !kind.empty()) {
        out.other.push_back(std::move(j));
        continue;
      }
      out.records.push_back(j.get<T>());
    } catch (const std::exception&) {
      ++out.malformed_lines;
    }
  }
  return out;
}

}  // namespace

NdjsonRead<PasteFixExample> read_examples(std::istream& in) {
  return read_ndjson<PasteFixExample>(in, "example");
}

NdjsonRead<SuggestionEvent> read_events(std::istream& in) {
  // SuggestionEvent uses "kind" for its own event kind.
  NdjsonRead<SuggestionEvent> out;
  std::string line;
  while (std::getline(in, line)) {
    if (text::is_blank(line)) continue;
    try {
      out.records.push_back(json::parse(line).get<SuggestionEvent>());
    } catch (const std::exception&) {
      ++out.malformed_lines;
    }
  }
  return out;
}

namespace {

std::string cell(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", *v);
  return buf;
}

}  // namespace

std::string format_offline_table(const OfflineReport& report) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-20s %8s %8s %8s %8s %8s %8s\n", "language", "edit", "no-edit",
                "overall", "recall", "chrF", "n");
  os << buf;
  const auto row = [&](const std::string& name, const MetricRow& r) {
    std::snprintf(buf, sizeof buf, "%-20s %8s %8s %8s %8s %8s %8zu\n", name.c_str(),
                  cell(r.edit_exact_match).c_str(), cell(r.no_edit_exact_match).c_str(),
                  cell(r.overall_exact_match).c_str(), cell(r.recall).c_str(),
                  cell(r.median_chrf).c_str(), r.records);
    os << buf;
  };
  for (const auto& [lang, r] : report.per_language) row(lang, r);
  row("Overall", report.overall);
  return os.str();
}

std::string format_online_report(const OnlineReport& r) {
  std::ostringstream os;
  os << "shown:               " << r.shown << "\n"
     << "accepted:            " << r.accepted << "\n"
     << "dismissed:           " << r.dismissed << "\n"
     << "acceptance rate:     " << cell(100.0 * r.acceptance_rate) << "%\n"
     << "avg chars modified:  " << cell(r.avg_chars_modified) << "\n"
     << "avg chars added:     " << cell(r.avg_chars_added) << "\n"
     << "survival:            "
     << (r.mean_survival ? cell(100.0 * *r.mean_survival) + "%" : std::string("-")) << "\n"
     << "median latency (ms): " << cell(r.median_latency_ms) << "\n"
     << "throughput (qps):    " << cell(r.throughput_qps) << "\n";
  return os.str();
}

}  // namespace smartpaste

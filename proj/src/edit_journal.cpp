#include "smartpaste/edit_journal.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <nlohmann/json.hpp>
#include <string_view>

#include "smartpaste/text.hpp"

namespace smartpaste {

using json = nlohmann::json;

ResolvedDelta resolve_delta(std::string_view content, const EditDelta& delta) {
  ResolvedDelta r;
  r.begin = text::byte_offset(content, delta.start_offset);
  try {
    r.end = r.begin + text::byte_offset(content.substr(r.begin), delta.deleted_length);
  } catch (const RangeOutOfBounds&) {
    throw RangeOutOfBounds("delta range [" + std::to_string(delta.start_offset) + ", " +
                           std::to_string(delta.start_offset + delta.deleted_length) +
                           ") exceeds content length " +
                           std::to_string(text::length(content)));
  }
  return r;
}

std::string apply_delta(std::string_view content, const EditDelta& delta) {
  const auto r = resolve_delta(content, delta);
  std::string out;
  out.reserve(content.size() - (r.end - r.begin) + delta.inserted_text.size());
  out.append(content.substr(0, r.begin));
  out.append(delta.inserted_text);
  out.append(content.substr(r.end));
  return out;
}

Timestamp timestamp_of(const JourneyEvent& event) {
  return std::visit([](const auto& e) { return e.timestamp; }, event);
}

std::string reconstruct(const EditJourney& journey, std::size_t upto) {
  if (journey.events.empty() || !std::holds_alternative<FileSnapshot>(journey.events.front())) {
    throw MalformedJourney("journey " + journey.journey_id + " does not begin with a snapshot");
  }
  if (upto >= journey.events.size()) {
    throw RangeOutOfBounds("event index " + std::to_string(upto) + " out of bounds (" +
                           std::to_string(journey.events.size()) + " events)");
  }
  // Replay restarts from the nearest snapshot at or before `upto`.
  std::size_t start = upto;
  while (!std::holds_alternative<FileSnapshot>(journey.events[start])) --start;
  std::string content = std::get<FileSnapshot>(journey.events[start]).content;
  for (std::size_t i = start + 1; i <= upto; ++i) {
    const auto& delta = std::get<EditDelta>(journey.events[i]);
    try {
      content = apply_delta(content, delta);
    } catch (const RangeOutOfBounds& e) {
      throw DeltaOutOfRange(i, e.what());
    }
  }
  return content;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::FirstEventNotSnapshot: return "FirstEventNotSnapshot";
    case ViolationKind::OutOfOrder: return "OutOfOrder";
    case ViolationKind::NoOpDelta: return "NoOpDelta";
    case ViolationKind::DeltaOutOfRange: return "DeltaOutOfRange";
    case ViolationKind::SnapshotMismatch: return "SnapshotMismatch";
  }
  return "Unknown";
}

std::vector<Violation> validate_journey(const EditJourney& journey) {
  std::vector<Violation> out;
  if (journey.events.empty()) {
    out.push_back({0, ViolationKind::FirstEventNotSnapshot});
    return out;
  }
  std::string content;
  bool have_content = false;
  Timestamp last_ts = timestamp_of(journey.events.front());
  for (std::size_t i = 0; i < journey.events.size(); ++i) {
    const auto& ev = journey.events[i];
    const Timestamp ts = timestamp_of(ev);
    if (ts < last_ts) out.push_back({i, ViolationKind::OutOfOrder});
    last_ts = std::max(last_ts, ts);

    if (const auto* snap = std::get_if<FileSnapshot>(&ev)) {
      if (!have_content) {
        content = snap->content;
        have_content = true;
      } else if (snap->content != content) {
        out.push_back({i, ViolationKind::SnapshotMismatch});
      }
      continue;
    }
    const auto& delta = std::get<EditDelta>(ev);
    if (i == 0) {
      out.push_back({0, ViolationKind::FirstEventNotSnapshot});
      continue;
    }
    if (!have_content) continue;
    if (delta.deleted_length == 0 && delta.inserted_text.empty()) {
      out.push_back({i, ViolationKind::NoOpDelta});
      continue;
    }
    try {
      content = apply_delta(content, delta);
    } catch (const RangeOutOfBounds&) {
      out.push_back({i, ViolationKind::DeltaOutOfRange});
    }
  }
  return out;
}

namespace {

Provenance parse_provenance(const json& j) {
  if (!j.contains("provenance") || j["provenance"].is_null()) return Provenance::Unknown;
  const auto s = j["provenance"].get<std::string>();
  if (s == "Internal") return Provenance::Internal;
  if (s == "ThirdParty") return Provenance::ThirdParty;
  if (s == "Unknown") return Provenance::Unknown;
  throw std::invalid_argument("unknown provenance " + s);
}

std::string checked_text(const json& j, const char* key) {
  auto s = j.at(key).get<std::string>();
  if (!text::is_valid_utf8(s)) throw std::invalid_argument("invalid UTF-8");
  return text::normalize_newlines(s);
}

Timestamp checked_timestamp(const json& j) {
  const auto ts = j.at("timestamp").get<Timestamp>();
  if (ts < 0) throw std::invalid_argument("negative timestamp");
  return ts;
}

}  // namespace

JourneyIngest ingest_journeys(std::istream& in) {
  struct Pending {
    EditJourney journey;
    bool has_meta = false;
  };
  std::vector<Pending> pending;
  std::map<std::string, std::size_t, std::less<>> index;
  JourneyIngest result;

  std::string line;
  while (std::getline(in, line)) {
    if (text::is_blank(line)) continue;
    try {
      const auto j = json::parse(line);
      const auto kind = j.at("kind").get<std::string>();
      const auto id = j.at("journey_id").get<std::string>();
      JourneyEvent event;
      Provenance provenance = Provenance::Unknown;
      if (kind == "snapshot") {
        FileSnapshot s;
        s.journey_id = id;
        s.file_path = j.at("file_path").get<std::string>();
        s.language = j.at("language").get<std::string>();
        s.timestamp = checked_timestamp(j);
        s.content = checked_text(j, "content");
        provenance = parse_provenance(j);
        event = std::move(s);
      } else if (kind == "delta") {
        EditDelta d;
        d.journey_id = id;
        d.timestamp = checked_timestamp(j);
        d.start_offset = j.at("start_offset").get<std::size_t>();
        d.deleted_length = j.at("deleted_length").get<std::size_t>();
        d.inserted_text = checked_text(j, "inserted_text");
        if (d.deleted_length == 0 && d.inserted_text.empty()) {
          throw std::invalid_argument("no-op delta");
        }
        event = std::move(d);
      } else {
        throw std::invalid_argument("unknown kind " + kind);
      }

      auto [it, inserted] = index.try_emplace(id, pending.size());
      if (inserted) {
        pending.emplace_back();
        pending.back().journey.journey_id = id;
      }
      auto& p = pending[it->second];
      if (const auto* snap = std::get_if<FileSnapshot>(&event); snap && !p.has_meta) {
        p.journey.file_path = snap->file_path;
        p.journey.language = snap->language;
        p.journey.provenance = provenance;
        p.has_meta = true;
      }
      p.journey.events.push_back(std::move(event));
    } catch (const std::exception&) {
      ++result.malformed_lines;
    }
  }

  result.journeys.reserve(pending.size());
  for (auto& p : pending) {
    std::stable_sort(p.journey.events.begin(), p.journey.events.end(),
                     [](const JourneyEvent& a, const JourneyEvent& b) {
                       return timestamp_of(a) < timestamp_of(b);
                     });
    result.journeys.push_back(std::move(p.journey));
  }
  return result;
}

}  // namespace smartpaste

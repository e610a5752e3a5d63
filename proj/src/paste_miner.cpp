#include "smartpaste/paste_miner.hpp"

#include <algorithm>
#include <future>

#include "smartpaste/text.hpp"

namespace smartpaste {

PasteRegion make_region(std::size_t start_line, std::size_t end_line) {
  if (start_line > end_line) {
    throw InvalidArgument("region start " + std::to_string(start_line) + " is after end " +
                          std::to_string(end_line));
  }
  return {start_line, end_line};
}

std::map<std::string, std::vector<std::string>> MinerConfig::default_import_patterns() {
  return {
      {"python", {R"(^\s*(import|from)\s+\S)"}},
      {"c", {R"(^\s*#\s*include\b)"}},
      {"cpp", {R"(^\s*#\s*include\b)", R"(^\s*(export\s+)?import\s+\S)"}},
      {"java", {R"(^\s*import\s+\S)"}},
      {"kotlin", {R"(^\s*import\s+\S)"}},
      {"go", {R"(^\s*import\b)"}},
      {"rust", {R"(^\s*(pub\s+)?use\s+\S)", R"(^\s*extern\s+crate\s)"}},
      {"javascript", {R"(^\s*import\b)", R"(\brequire\s*\()"}},
      {"typescript", {R"(^\s*import\b)", R"(\brequire\s*\()"}},
      {"csharp", {R"(^\s*using\s+\S)"}},
      {"proto", {R"(^\s*import\s+")"}},
      {"starlark", {R"(^\s*load\s*\()"}},
      // Fallback for languages without their own entry.
      {"*", {R"(^\s*(import|using|use)\s+\S)", R"(^\s*#\s*include\b)", R"(^\s*from\s+\S+\s+import\b)",
             R"(^\s*load\s*\()"}},
  };
}

void MinerConfig::validate() const {
  if (min_candidate_chars < 1) throw InvalidArgument("min_candidate_chars must be >= 1");
  if (max_candidate_lines < 1) throw InvalidArgument("max_candidate_lines must be >= 1");
  if (idle_cutoff && *idle_cutoff < 0) throw InvalidArgument("idle_cutoff must be >= 0");
}

std::string region_text(std::string_view content, const PasteRegion& region) {
  const auto starts = text::line_starts(content);
  if (region.end_line >= starts.size() || region.start_line > region.end_line) {
    throw RangeOutOfBounds("region [" + std::to_string(region.start_line) + ", " +
                           std::to_string(region.end_line) + "] outside " +
                           std::to_string(starts.size()) + " lines");
  }
  const auto begin = starts[region.start_line];
  const auto end =
      region.end_line + 1 < starts.size() ? starts[region.end_line + 1] - 1 : content.size();
  return std::string(content.substr(begin, end - begin));
}

std::size_t count_nonempty_lines(std::string_view s) {
  const auto lines = text::split_lines(s);
  return static_cast<std::size_t>(std::count_if(
      lines.begin(), lines.end(), [](const std::string& l) { return !text::is_blank(l); }));
}

std::optional<PasteRegion> inserted_region(std::string_view content_after, std::size_t begin,
                                           std::string_view inserted) {
  const auto first = inserted.find_first_not_of('\n');
  if (first == std::string_view::npos) return std::nullopt;
  const auto last = inserted.find_last_not_of('\n');
  return PasteRegion{text::line_of(content_after, begin + first),
                     text::line_of(content_after, begin + last)};
}

bool is_paste_like(const EditDelta& delta, const MinerConfig& config) {
  if (delta.inserted_text.size() < config.min_candidate_chars) return false;  // cheap pre-check
  if (text::length(delta.inserted_text) < config.min_candidate_chars) return false;
  const auto lines = count_nonempty_lines(delta.inserted_text);
  return lines >= 1 && lines <= config.max_candidate_lines;
}

std::vector<PasteCandidate> detect_paste_candidates(const EditJourney& journey,
                                                    const MinerConfig& config) {
  config.validate();
  std::vector<PasteCandidate> out;
  if (journey.events.empty() || !std::holds_alternative<FileSnapshot>(journey.events.front())) {
    throw MalformedJourney("journey " + journey.journey_id + " does not begin with a snapshot");
  }
  std::string content;
  for (std::size_t i = 0; i < journey.events.size(); ++i) {
    if (const auto* snap = std::get_if<FileSnapshot>(&journey.events[i])) {
      content = snap->content;
      continue;
    }
    const auto& delta = std::get<EditDelta>(journey.events[i]);
    ResolvedDelta r;
    try {
      r = resolve_delta(content, delta);
    } catch (const RangeOutOfBounds& e) {
      throw DeltaOutOfRange(i, e.what());
    }
    std::string after = content.substr(0, r.begin) + delta.inserted_text + content.substr(r.end);
    if (is_paste_like(delta, config)) {
      if (auto region = inserted_region(after, r.begin, delta.inserted_text)) {
        PasteCandidate c;
        c.journey_id = journey.journey_id;
        c.event_index = i;
        c.region = *region;
        c.pasted_text = delta.inserted_text;
        c.file_before = content;
        c.file_after_paste = after;
        c.timestamp = delta.timestamp;
        out.push_back(std::move(c));
      }
    }
    content = std::move(after);
  }
  return out;
}

PasteRegion adjust_region(const PasteRegion& region, const EditDelta& delta,
                          std::string_view content) {
  const auto starts = text::line_starts(content);
  if (region.start_line > region.end_line || region.end_line >= starts.size()) {
    throw RangeOutOfBounds("region outside content");
  }
  const auto r = resolve_delta(content, delta);

  const auto span_begin = starts[region.start_line];
  const auto span_end =
      region.end_line + 1 < starts.size() ? starts[region.end_line + 1] - 1 : content.size();
  if (delta.inserted_text.empty() && r.end > r.begin && r.begin <= span_begin &&
      r.end >= span_end) {
    throw RegionDestroyed("delta deletes the entire region");
  }

  // The delta rewrites lines [first, last]; they become lines
  // [first, first + inserted newlines] afterwards.
  const auto first = text::line_of(content, r.begin);
  const auto last = text::line_of(content, r.end);
  const auto inserted_nl = text::count_newlines(delta.inserted_text);
  const auto shift = [&](std::size_t line) { return line - last + first + inserted_nl; };

  PasteRegion out;
  if (region.start_line < first) {
    out.start_line = region.start_line;
  } else if (region.start_line > last) {
    out.start_line = shift(region.start_line);
  } else {
    out.start_line = first;
  }
  if (region.end_line < first) {
    out.end_line = region.end_line;
  } else if (region.end_line > last) {
    out.end_line = shift(region.end_line);
  } else {
    out.end_line = first + inserted_nl;
  }
  return out;
}

namespace {

struct ImportMatcher {
  std::vector<std::regex> patterns;

  ImportMatcher(const MinerConfig& config, const std::string& language) {
    auto it = config.import_patterns.find(language);
    if (it == config.import_patterns.end()) it = config.import_patterns.find("*");
    if (it == config.import_patterns.end()) return;
    for (const auto& p : it->second) patterns.emplace_back(p, std::regex::ECMAScript);
  }

  bool matches(std::string_view line) const {
    return std::any_of(patterns.begin(), patterns.end(), [&](const std::regex& re) {
      return std::regex_search(line.begin(), line.end(), re);
    });
  }
};

}  // namespace

TrackResult track_fix(const EditJourney& journey, const PasteCandidate& candidate,
                      const MinerConfig& config) {
  config.validate();
  if (candidate.event_index >= journey.events.size()) {
    throw RangeOutOfBounds("candidate event index outside journey");
  }
  const ImportMatcher imports(config, journey.language);

  std::string content = candidate.file_after_paste;
  PasteRegion region = candidate.region;
  const std::string pasted_region = region_text(content, region);
  std::string fixed = pasted_region;
  Timestamp last_activity = candidate.timestamp;
  TrackResult result;

  for (std::size_t i = candidate.event_index + 1; i < journey.events.size(); ++i) {
    const auto& ev = journey.events[i];
    if (const auto* snap = std::get_if<FileSnapshot>(&ev)) {
      if (snap->content != content) break;
      continue;
    }
    const auto& delta = std::get<EditDelta>(ev);
    if (config.idle_cutoff && delta.timestamp - last_activity > *config.idle_cutoff) break;
    ResolvedDelta r;
    try {
      r = resolve_delta(content, delta);
    } catch (const RangeOutOfBounds& e) {
      throw DeltaOutOfRange(i, e.what());
    }
    const auto start_line = text::line_of(content, r.begin);
    const bool related = region.contains(start_line);

    std::string after = content.substr(0, r.begin) + delta.inserted_text + content.substr(r.end);
    if (!related) {
      // Lines holding inserted text; for a pure deletion, the joined line.
      auto first = start_line;
      auto last = start_line;
      if (const auto ir = inserted_region(after, r.begin, delta.inserted_text)) {
        first = ir->start_line;
        last = ir->end_line;
      }
      const auto lines = text::split_lines(after);
      bool import_edit = false;
      for (auto l = first; l <= last && l < lines.size(); ++l) {
        if (imports.matches(lines[l])) {
          import_edit = true;
          break;
        }
      }
      if (!import_edit) break;
    }
    // A new paste ends this example and is tracked on its own. Import lines
    // added in one go are exempt.
    if (related && is_paste_like(delta, config)) break;

    try {
      region = adjust_region(region, delta, content);
    } catch (const RegionDestroyed&) {
      result.outcome = TrackOutcome::FullDeletion;
      result.related_edits += related ? 1 : 0;
      return result;
    }
    content = std::move(after);
    if (related) {
      fixed = region_text(content, region);
      last_activity = delta.timestamp;
      ++result.related_edits;
    }
  }

  PasteFixExample ex;
  ex.journey_id = journey.journey_id;
  ex.language = journey.language;
  ex.file_path = journey.file_path;
  ex.file_after_paste = candidate.file_after_paste;
  ex.region = candidate.region;
  ex.pasted_text = candidate.pasted_text;
  ex.fixed_region_text = std::move(fixed);
  ex.label = ex.fixed_region_text == pasted_region ? Label::NoEdit : Label::Edit;
  ex.created_at = candidate.timestamp;
  ex.char_length = text::length(ex.file_after_paste) + text::length(ex.fixed_region_text);
  ex.provenance = journey.provenance;
  result.example = std::move(ex);
  return result;
}

MiningStats& MiningStats::operator+=(const MiningStats& o) {
  journeys += o.journeys;
  failed_journeys += o.failed_journeys;
  candidates += o.candidates;
  edit_examples += o.edit_examples;
  no_edit_examples += o.no_edit_examples;
  discarded += o.discarded;
  return *this;
}

MiningResult mine_journey(const EditJourney& journey, const MinerConfig& config) {
  MiningResult out;
  out.stats.journeys = 1;
  if (!validate_journey(journey).empty()) {
    out.stats.failed_journeys = 1;
    return out;
  }
  try {
    const auto candidates = detect_paste_candidates(journey, config);
    out.stats.candidates = candidates.size();
    for (const auto& c : candidates) {
      auto tracked = track_fix(journey, c, config);
      if (tracked.outcome == TrackOutcome::FullDeletion || !tracked.example) {
        ++out.stats.discarded;
        continue;
      }
      if (tracked.example->label == Label::Edit) {
        ++out.stats.edit_examples;
      } else {
        ++out.stats.no_edit_examples;
      }
      out.examples.push_back(std::move(*tracked.example));
    }
  } catch (const Error&) {
    MiningResult failed;
    failed.stats.journeys = 1;
    failed.stats.failed_journeys = 1;
    return failed;
  }
  return out;
}

MiningResult mine(const std::vector<EditJourney>& journeys, const MinerConfig& config,
                  unsigned threads) {
  config.validate();
  MiningResult out;
  if (journeys.empty()) return out;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(journeys.size())));

  const auto run = [&](std::size_t begin, std::size_t end) {
    MiningResult part;
    for (std::size_t i = begin; i < end; ++i) {
      auto r = mine_journey(journeys[i], config);
      part.stats += r.stats;
      std::move(r.examples.begin(), r.examples.end(), std::back_inserter(part.examples));
    }
    return part;
  };

  if (threads == 1) return run(0, journeys.size());

  std::vector<std::future<MiningResult>> parts;
  const auto chunk = (journeys.size() + threads - 1) / threads;
  for (std::size_t begin = 0; begin < journeys.size(); begin += chunk) {
    parts.push_back(std::async(std::launch::async, run, begin,
                               std::min(journeys.size(), begin + chunk)));
  }
  for (auto& f : parts) {
    auto part = f.get();
    out.stats += part.stats;
    std::move(part.examples.begin(), part.examples.end(), std::back_inserter(out.examples));
  }
  return out;
}

const char* to_string(Label label) { return label == Label::Edit ? "Edit" : "NoEdit"; }

const char* to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::Internal: return "Internal";
    case Provenance::ThirdParty: return "ThirdParty";
    case Provenance::Unknown: return "Unknown";
  }
  return "Unknown";
}

}  // namespace smartpaste

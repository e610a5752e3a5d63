#pragma once

// Random data generators for property tests. They record their own ground
// truth instead of asking the library.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "smartpaste/edit_journal.hpp"
#include "smartpaste/paste_miner.hpp"
#include "smartpaste/text.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

// Small alphabet with multi-byte scalars and newlines.
inline std::u32string random_u32(Rng& rng, std::size_t max_len, bool newlines = true) {
  static const std::u32string alphabet = U"abcxyz _(){}=;é中\U0001F600";
  std::u32string s;
  const auto n = uniform(rng, 0, max_len);
  for (std::size_t i = 0; i < n; ++i) {
    if (newlines && coin(rng, 0.12)) {
      s += U'\n';
    } else {
      s += alphabet[uniform(rng, 0, alphabet.size() - 1)];
    }
  }
  return s;
}

inline std::string random_text(Rng& rng, std::size_t max_len, bool newlines = true) {
  return smartpaste::text::encode(random_u32(rng, max_len, newlines));
}

// ASCII string over a small alphabet, for metric oracles.
inline std::string random_ascii(Rng& rng, std::size_t max_len, const std::string& alphabet = "abcd ") {
  std::string s;
  const auto n = uniform(rng, 0, max_len);
  for (std::size_t i = 0; i < n; ++i) s += alphabet[uniform(rng, 0, alphabet.size() - 1)];
  return s;
}

inline std::vector<std::string> random_lines(Rng& rng, std::size_t max_lines, std::size_t pool = 4) {
  std::vector<std::string> lines;
  const auto n = uniform(rng, 0, max_lines);
  for (std::size_t i = 0; i < n; ++i) lines.push_back("l" + std::to_string(uniform(rng, 0, pool)));
  return lines;
}

struct Mutation {
  smartpaste::EditDelta delta;
  std::u32string content_after;
};

inline Mutation random_delta(Rng& rng, const std::u32string& content, const std::string& id,
                             smartpaste::Timestamp ts) {
  Mutation m;
  for (;;) {
    const auto offset = uniform(rng, 0, content.size());
    const auto deleted = uniform(rng, 0, std::min<std::size_t>(content.size() - offset, 6));
    const auto inserted = random_u32(rng, 8);
    if (deleted == 0 && inserted.empty()) continue;
    m.delta = {id, ts, offset, deleted, smartpaste::text::encode(inserted)};
    m.content_after = content.substr(0, offset) + inserted + content.substr(offset + deleted);
    return m;
  }
}

struct GroundTruthJourney {
  smartpaste::EditJourney journey;
  std::vector<std::string> content_after_event;
};

// Snapshot, then deltas, with occasional checkpoint snapshots of the true
// content.
inline GroundTruthJourney random_journey(Rng& rng, const std::string& id, std::size_t max_events) {
  GroundTruthJourney g;
  g.journey.journey_id = id;
  g.journey.file_path = "src/" + id + ".py";
  g.journey.language = "python";
  std::u32string content = random_u32(rng, 60);
  smartpaste::Timestamp ts = 1000;
  g.journey.events.push_back(smartpaste::FileSnapshot{id, g.journey.file_path, "python", ts,
                                                      smartpaste::text::encode(content)});
  g.content_after_event.push_back(smartpaste::text::encode(content));
  const auto events = uniform(rng, 0, max_events);
  for (std::size_t e = 0; e < events; ++e) {
    ts += static_cast<smartpaste::Timestamp>(uniform(rng, 0, 3));
    if (coin(rng, 0.1)) {
      g.journey.events.push_back(smartpaste::FileSnapshot{id, g.journey.file_path, "python", ts,
                                                          smartpaste::text::encode(content)});
    } else {
      auto m = random_delta(rng, content, id, ts);
      content = m.content_after;
      g.journey.events.push_back(m.delta);
    }
    g.content_after_event.push_back(smartpaste::text::encode(content));
  }
  return g;
}

// Index of the first scalar of `line` in u32 content.
inline std::size_t line_offset(const std::u32string& content, std::size_t line) {
  std::size_t off = 0;
  for (std::size_t l = 0; l < line; ++l) off = content.find(U'\n', off) + 1;
  return off;
}

inline std::size_t line_end(const std::u32string& content, std::size_t line) {
  const auto start = line_offset(content, line);
  const auto nl = content.find(U'\n', start);
  return nl == std::u32string::npos ? content.size() : nl;
}

struct PlantedJourney {
  smartpaste::EditJourney journey;
  smartpaste::Label label;
};

// One paste per journey. With `fix`, 1-3 in-region insertions follow the
// paste; either way an unrelated edit outside the region comes next, and
// sometimes another in-region edit after it (which must be ignored).
inline PlantedJourney paste_journey(Rng& rng, const std::string& id, bool fix) {
  using smartpaste::text::encode;
  PlantedJourney p;
  p.label = fix ? smartpaste::Label::Edit : smartpaste::Label::NoEdit;
  auto& j = p.journey;
  j.journey_id = id;
  j.file_path = "pkg/" + id + ".py";
  j.language = "python";
  j.provenance = smartpaste::Provenance::Internal;

  const auto base_lines = uniform(rng, 8, 24);
  std::u32string content;
  for (std::size_t i = 0; i < base_lines; ++i) {
    if (i) content += U'\n';
    content += U"v" + smartpaste::text::decode(std::to_string(i)) + U" = " +
               smartpaste::text::decode(std::to_string(uniform(rng, 0, 999)));
    if (coin(rng, 0.2)) content += U"  # café";
  }
  smartpaste::Timestamp ts = 10'000;
  j.events.push_back(smartpaste::FileSnapshot{id, j.file_path, j.language, ts, encode(content)});

  auto push = [&](std::size_t offset, std::size_t deleted, const std::u32string& ins) {
    ts += static_cast<smartpaste::Timestamp>(uniform(rng, 1, 500));
    j.events.push_back(smartpaste::EditDelta{id, ts, offset, deleted, encode(ins)});
    content = content.substr(0, offset) + ins + content.substr(offset + deleted);
  };

  // A little typing first.
  for (std::size_t k = uniform(rng, 0, 3); k > 0; --k) {
    const auto line = uniform(rng, 0, base_lines - 1);
    push(line_end(content, line), 0, U"x");
  }

  // The paste: whole lines inserted before `at`.
  const auto at = uniform(rng, 1, base_lines - 1);
  const auto paste_lines = uniform(rng, 1, 5);
  std::u32string pasted;
  for (std::size_t i = 0; i < paste_lines; ++i) {
    pasted += U"call_" + smartpaste::text::decode(std::to_string(uniform(rng, 100, 999))) + U"(arg)\n";
  }
  push(line_offset(content, at), 0, pasted);
  const std::size_t region_start = at;
  const std::size_t region_end = at + paste_lines - 1;

  if (fix) {
    for (std::size_t k = uniform(rng, 1, 3); k > 0; --k) {
      const auto line = uniform(rng, region_start, region_end);
      const auto lo = line_offset(content, line);
      const auto hi = line_end(content, line);
      push(uniform(rng, lo, hi), 0, coin(rng) ? U"Q" : U"_ü");
    }
  }

  if (coin(rng, 0.9)) {
    // Unrelated edit on a line outside the region (region bounds unchanged
    // by the in-region insertions above, which add no newlines).
    std::size_t line;
    do {
      line = uniform(rng, 0, base_lines + paste_lines - 1);
    } while (line >= region_start && line <= region_end);
    push(line_end(content, line), 0, U"y");
    if (coin(rng, 0.5)) {
      const auto rl = uniform(rng, region_start, region_end);
      push(line_end(content, rl), 0, U"LATE");
    }
  }
  return p;
}

}  // namespace gen

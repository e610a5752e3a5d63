#pragma once

// Greedy selection of prompt context lines under a token budget.

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "smartpaste/paste_miner.hpp"

namespace smartpaste {

inline constexpr std::size_t kDefaultTokenBudget = 4096;
inline constexpr std::string_view kDefaultGapMarker = "\u22EE";

// Deterministic per-line token cost. Selections cost the sum of their lines.
using Tokenizer = std::function<std::size_t(std::string_view line)>;

// ceil(chars / 4) + 1, with chars counted in scalar values.
std::size_t approx_token_cost(std::string_view line);
Tokenizer default_tokenizer();

class RegionOutOfBounds : public RangeOutOfBounds {
 public:
  using RangeOutOfBounds::RangeOutOfBounds;
};

struct ContextSelection {
  std::vector<std::size_t> lines;  // ascending, unique
  std::size_t budget = 0;
  PasteRegion region;
  std::size_t cost = 0;

  bool empty() const { return lines.empty(); }
  bool contains(std::size_t line) const;
};

// Seeds the selection with line 0 and the region, returns an empty selection
// if that already exceeds the budget, then grows it one line per round. Each
// round tries, in strict priority order, the header pointer (moving down from
// line 1), the pre-paste pointer (moving up from the line above the region)
// and the post-paste pointer (moving down from the line below it). A pointer
// only advances when its line is added, so a pointer sitting on an
// already-selected or unaffordable line stays there. Stops after a round that
// adds nothing.
ContextSelection build_context(const std::vector<std::string>& lines, const PasteRegion& region,
                               std::size_t budget, const Tokenizer& tokenizer = default_tokenizer());

// Selected lines of [begin, end) in file order, with each maximal run of
// omitted lines replaced by one gap-marker line.
std::vector<std::string> render_context_lines(const std::vector<std::string>& lines,
                                              const ContextSelection& selection, std::size_t begin,
                                              std::size_t end, std::string_view gap_marker);

std::string render_context(const std::vector<std::string>& lines, const ContextSelection& selection,
                           std::string_view gap_marker = kDefaultGapMarker);

}  // namespace smartpaste

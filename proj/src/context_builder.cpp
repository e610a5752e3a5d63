#include "smartpaste/context_builder.hpp"

#include <algorithm>
#include <optional>

#include "smartpaste/text.hpp"

namespace smartpaste {

std::size_t approx_token_cost(std::string_view line) {
  return (text::length(line) + 3) / 4 + 1;
}

Tokenizer default_tokenizer() { return approx_token_cost; }

bool ContextSelection::contains(std::size_t line) const {
  return std::binary_search(lines.begin(), lines.end(), line);
}

ContextSelection build_context(const std::vector<std::string>& lines, const PasteRegion& region,
                               std::size_t budget, const Tokenizer& tokenizer) {
  const auto n = lines.size();
  if (region.start_line > region.end_line || region.end_line >= n) {
    throw RegionOutOfBounds("region [" + std::to_string(region.start_line) + ", " +
                            std::to_string(region.end_line) + "] outside a " + std::to_string(n) +
                            "-line file");
  }

  ContextSelection sel;
  sel.budget = budget;
  sel.region = region;

  std::vector<char> chosen(n, 0);
  std::vector<std::optional<std::size_t>> costs(n);
  const auto cost_of = [&](std::size_t i) {
    if (!costs[i]) costs[i] = tokenizer(lines[i]);
    return *costs[i];
  };

  std::size_t used = 0;
  chosen[0] = 1;
  used += cost_of(0);
  for (auto i = region.start_line; i <= region.end_line; ++i) {
    if (!chosen[i]) {
      chosen[i] = 1;
      used += cost_of(i);
    }
  }
  if (used > budget) {
    sel.cost = 0;
    return sel;
  }

  // Pointers are signed so the pre-paste pointer can run off the top.
  using Index = std::ptrdiff_t;
  const auto count = static_cast<Index>(n);
  Index header = 1;
  Index pre = static_cast<Index>(region.start_line) - 1;
  Index post = static_cast<Index>(region.end_line) + 1;

  const auto try_add = [&](Index p) {
    if (p < 0 || p >= count) return false;
    const auto i = static_cast<std::size_t>(p);
    if (chosen[i] || used + cost_of(i) > budget) return false;
    chosen[i] = 1;
    used += cost_of(i);
    return true;
  };

  for (;;) {
    if (try_add(header)) {
      ++header;
    } else if (try_add(pre)) {
      --pre;
    } else if (try_add(post)) {
      ++post;
    } else {
      break;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (chosen[i]) sel.lines.push_back(i);
  }
  sel.cost = used;
  return sel;
}

std::vector<std::string> render_context_lines(const std::vector<std::string>& lines,
                                              const ContextSelection& selection, std::size_t begin,
                                              std::size_t end, std::string_view gap_marker) {
  std::vector<std::string> out;
  end = std::min(end, lines.size());
  bool in_gap = false;
  for (auto i = begin; i < end; ++i) {
    if (selection.contains(i)) {
      out.push_back(lines[i]);
      in_gap = false;
    } else if (!in_gap) {
      out.emplace_back(gap_marker);
      in_gap = true;
    }
  }
  return out;
}

std::string render_context(const std::vector<std::string>& lines, const ContextSelection& selection,
                           std::string_view gap_marker) {
  return text::join_lines(render_context_lines(lines, selection, 0, lines.size(), gap_marker));
}

}  // namespace smartpaste

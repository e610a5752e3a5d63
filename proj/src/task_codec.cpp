#include "smartpaste/task_codec.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>

#include "smartpaste/text.hpp"

namespace smartpaste {

PatchError::PatchError(Kind kind, std::size_t where, const std::string& detail)
    : Error(std::string(to_string(kind)) + " at " + std::to_string(where) + ": " + detail),
      kind_(kind),
      where_(where) {}

const char* to_string(PatchError::Kind kind) {
  using K = PatchError::Kind;
  switch (kind) {
    case K::MalformedHunkHeader: return "MalformedHunkHeader";
    case K::UnknownLinePrefix: return "UnknownLinePrefix";
    case K::MisorderedHunkLines: return "MisorderedHunkLines";
    case K::EmptyHunk: return "EmptyHunk";
    case K::OverlappingHunks: return "OverlappingHunks";
    case K::ContextMismatch: return "ContextMismatch";
    case K::HunkOutOfRange: return "HunkOutOfRange";
  }
  return "Unknown";
}

PromptParts prompt_parts(std::string_view file_path, const std::vector<std::string>& file_lines,
                         const PasteRegion& region, const ContextSelection& selection,
                         const CodecConfig& config) {
  if (region.start_line > region.end_line || region.end_line >= file_lines.size()) {
    throw RegionOutOfBounds("region outside file");
  }
  for (auto i = region.start_line; i <= region.end_line; ++i) {
    if (!selection.contains(i)) {
      throw InvalidArgument("context selection does not cover region line " + std::to_string(i));
    }
  }

  PromptParts parts;
  const auto name = std::filesystem::path(std::string(file_path)).filename().string();
  parts.task_prefix = config.task_verb + " " + name;
  parts.pre_context =
      render_context_lines(file_lines, selection, 0, region.start_line, config.gap_marker);
  parts.pasted_lines.assign(file_lines.begin() + static_cast<std::ptrdiff_t>(region.start_line),
                            file_lines.begin() + static_cast<std::ptrdiff_t>(region.end_line) + 1);
  parts.post_context = render_context_lines(file_lines, selection, region.end_line + 1,
                                            file_lines.size(), config.gap_marker);

  for (const auto& line : parts.pasted_lines) {
    for (const auto* token : {&config.open_delimiter, &config.close_delimiter, &config.fix_marker}) {
      if (!token->empty() && line.find(*token) != std::string::npos) {
        throw DelimiterCollision("pasted content contains the token " + *token);
      }
    }
  }
  return parts;
}

std::string render_prompt(const PromptParts& parts, const CodecConfig& config) {
  std::string out;
  const auto emit = [&out](std::string_view line) {
    out.append(line);
    out.push_back('\n');
  };
  emit(parts.task_prefix);
  for (const auto& l : parts.pre_context) emit(l);
  emit(config.open_delimiter);
  for (const auto& l : parts.pasted_lines) emit(l);
  emit(config.close_delimiter);
  for (const auto& l : parts.post_context) emit(l);
  emit(config.fix_marker);
  return out;
}

std::string encode_prompt(const PasteFixExample& example, const ContextSelection& selection,
                          const CodecConfig& config) {
  const auto lines = text::split_lines(example.file_after_paste);
  return render_prompt(prompt_parts(example.file_path, lines, example.region, selection, config),
                       config);
}

void validate_patch(const EditPatch& patch) {
  for (std::size_t h = 0; h < patch.hunks.size(); ++h) {
    const auto& hunk = patch.hunks[h];
    if (hunk.removed.empty() && hunk.added.empty()) {
      throw PatchError(PatchError::Kind::EmptyHunk, h, "hunk changes nothing");
    }
    if (h > 0) {
      const auto& prev = patch.hunks[h - 1];
      if (hunk.start < prev.start + prev.removed.size()) {
        throw PatchError(PatchError::Kind::OverlappingHunks, h,
                         "hunk starts at " + std::to_string(hunk.start) +
                             " inside the previous hunk");
      }
    }
  }
}

std::string render_patch(const EditPatch& patch) {
  validate_patch(patch);
  std::string out;
  for (const auto& hunk : patch.hunks) {
    out += "@@ ";
    out += std::to_string(hunk.start);
    out += " @@\n";
    for (const auto& l : hunk.removed) {
      out.push_back('-');
      out += l;
      out.push_back('\n');
    }
    for (const auto& l : hunk.added) {
      out.push_back('+');
      out += l;
      out.push_back('\n');
    }
  }
  return out;
}

namespace {

std::optional<std::size_t> parse_header(std::string_view line) {
  constexpr std::string_view open = "@@ ";
  constexpr std::string_view close = " @@";
  if (line.size() <= open.size() + close.size() || !line.starts_with(open) ||
      !line.ends_with(close)) {
    return std::nullopt;
  }
  const auto digits = line.substr(open.size(), line.size() - open.size() - close.size());
  if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return std::nullopt;
  }
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return value;
}

}  // namespace

EditPatch parse_patch(std::string_view text) {
  EditPatch patch;
  if (text::is_blank(text)) return patch;

  auto lines = text::split_lines(text);
  if (text.back() == '\n') lines.pop_back();

  using K = PatchError::Kind;
  Hunk* current = nullptr;
  bool seen_added = false;
  const auto close_hunk = [&](std::size_t line_no) {
    if (current && current->removed.empty() && current->added.empty()) {
      throw PatchError(K::EmptyHunk, line_no, "hunk has no removed or added lines");
    }
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    const auto line_no = i + 1;
    if (line.starts_with("@@")) {
      const auto start = parse_header(line);
      if (!start) throw PatchError(K::MalformedHunkHeader, line_no, std::string(line));
      close_hunk(line_no);
      if (!patch.hunks.empty()) {
        const auto& prev = patch.hunks.back();
        if (*start < prev.start + prev.removed.size()) {
          throw PatchError(K::OverlappingHunks, line_no,
                           "hunk at " + std::to_string(*start) + " overlaps the previous hunk");
        }
      }
      patch.hunks.push_back(Hunk{*start, {}, {}});
      current = &patch.hunks.back();
      seen_added = false;
      continue;
    }
    if (line.starts_with('-') || line.starts_with('+')) {
      if (!current) throw PatchError(K::MalformedHunkHeader, line_no, "expected a hunk header");
      if (line.front() == '-') {
        if (seen_added) {
          throw PatchError(K::MisorderedHunkLines, line_no, "removed line after added lines");
        }
        current->removed.emplace_back(line.substr(1));
      } else {
        seen_added = true;
        current->added.emplace_back(line.substr(1));
      }
      continue;
    }
    throw PatchError(K::UnknownLinePrefix, line_no, std::string(line));
  }
  close_hunk(lines.size());
  return patch;
}

std::vector<std::string> apply_patch(const std::vector<std::string>& pasted_lines,
                                     const EditPatch& patch) {
  validate_patch(patch);
  using K = PatchError::Kind;
  for (std::size_t h = 0; h < patch.hunks.size(); ++h) {
    const auto& hunk = patch.hunks[h];
    if (hunk.start > pasted_lines.size() ||
        hunk.removed.size() > pasted_lines.size() - hunk.start) {
      throw PatchError(K::HunkOutOfRange, h,
                       "hunk at " + std::to_string(hunk.start) + " exceeds " +
                           std::to_string(pasted_lines.size()) + " region lines");
    }
    if (!std::equal(hunk.removed.begin(), hunk.removed.end(),
                    pasted_lines.begin() + static_cast<std::ptrdiff_t>(hunk.start))) {
      throw PatchError(K::ContextMismatch, h, "removed lines do not match the region");
    }
  }
  auto out = pasted_lines;
  for (auto it = patch.hunks.rbegin(); it != patch.hunks.rend(); ++it) {
    const auto first = out.begin() + static_cast<std::ptrdiff_t>(it->start);
    const auto pos = out.erase(first, first + static_cast<std::ptrdiff_t>(it->removed.size()));
    out.insert(pos, it->added.begin(), it->added.end());
  }
  return out;
}

EditPatch diff_region(const std::vector<std::string>& before,
                      const std::vector<std::string>& after) {
  const auto n = before.size();
  const auto m = after.size();
  // lcs[i][j]: LCS length of before[i..] and after[j..].
  std::vector<std::size_t> lcs((n + 1) * (m + 1), 0);
  const auto at = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
  for (auto i = n; i-- > 0;) {
    for (auto j = m; j-- > 0;) {
      lcs[at(i, j)] = before[i] == after[j]
                          ? lcs[at(i + 1, j + 1)] + 1
                          : std::max(lcs[at(i + 1, j)], lcs[at(i, j + 1)]);
    }
  }

  EditPatch patch;
  std::size_t i = 0;
  std::size_t j = 0;
  Hunk* open = nullptr;
  while (i < n || j < m) {
    if (i < n && j < m && before[i] == after[j]) {
      open = nullptr;
      ++i;
      ++j;
      continue;
    }
    if (!open) {
      patch.hunks.push_back(Hunk{i, {}, {}});
      open = &patch.hunks.back();
    }
    if (j == m || (i < n && lcs[at(i + 1, j)] >= lcs[at(i, j + 1)])) {
      open->removed.push_back(before[i++]);
    } else {
      open->added.push_back(after[j++]);
    }
  }
  return patch;
}

}  // namespace smartpaste

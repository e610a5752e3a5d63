#pragma once

// UTF-8 helpers and line utilities shared by every module.
//
// Text is stored as UTF-8 in std::string. Positions exposed to callers
// (edit offsets, metric lengths) are counted in Unicode scalar values so that
// they do not depend on the encoding; conversion happens at the boundary.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace smartpaste::text {

bool is_valid_utf8(std::string_view s);

// Throws InvalidText on malformed input.
std::u32string decode(std::string_view s);
std::string encode(std::u32string_view s);

// Number of scalar values. Throws InvalidText on malformed input.
std::size_t length(std::string_view s);

// Byte offset of the scalar at index `cp`; `cp == length(s)` maps to s.size().
// Throws RangeOutOfBounds when cp is past the end.
std::size_t byte_offset(std::string_view s, std::size_t cp);

// Replaces "\r\n" and lone "\r" with "\n".
std::string normalize_newlines(std::string_view s);

// Splits on '\n'. n newlines always yield n + 1 lines, so join_lines is the
// exact inverse.
std::vector<std::string> split_lines(std::string_view s);
std::string join_lines(const std::vector<std::string>& lines);

// Line index (0-based) of the byte at `byte_pos`.
std::size_t line_of(std::string_view s, std::size_t byte_pos);

// Byte offset at which each line starts.
std::vector<std::size_t> line_starts(std::string_view s);

std::size_t count_newlines(std::string_view s);

bool is_blank(std::string_view s);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view s);
std::string hex64(std::uint64_t v);

}  // namespace smartpaste::text

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace argenkit::utf8 {

// One decoded codepoint and the byte range it occupies in the source.
// Malformed bytes decode one at a time as U+FFFD with length 1 so that
// iteration is total and the original bytes can always be copied back.
struct Codepoint {
  char32_t value;
  std::size_t offset;
  std::size_t length;
};

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes the codepoint starting at `pos`.
Codepoint decode_at(std::string_view text, std::size_t pos);

std::vector<Codepoint> codepoints(std::string_view text);

bool is_valid(std::string_view text);

// Byte offset of the first malformed sequence, or npos.
std::size_t first_invalid(std::string_view text);

void append(std::string& out, char32_t cp);
std::string encode(char32_t cp);

// Unicode White_Space property.
bool is_whitespace(char32_t cp);

// Splits on runs of Unicode whitespace, dropping empty pieces.
std::vector<std::string> split_whitespace(std::string_view text);
std::vector<std::string_view> split_whitespace_views(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep = " ");

// Strips a leading UTF-8 byte order mark.
std::string_view strip_bom(std::string_view text);

// Byte ranges of extended grapheme clusters (UAX #29), as ICU segments them.
std::vector<std::pair<std::size_t, std::size_t>> grapheme_spans(std::string_view text);

}  // namespace argenkit::utf8

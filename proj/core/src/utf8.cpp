#include "argenkit/utf8.hpp"

#include <unicode/brkiter.h>
#include <unicode/uchar.h>
#include <unicode/utext.h>

#include <memory>

#include "argenkit/error.hpp"

namespace argenkit::utf8 {

namespace {

bool is_continuation(unsigned char b) { return (b & 0xC0) == 0x80; }

}  // namespace

Codepoint decode_at(std::string_view text, std::size_t pos) {
  const auto lead = static_cast<unsigned char>(text[pos]);
  const std::size_t remaining = text.size() - pos;
  const Codepoint invalid{kReplacement, pos, 1};

  if (lead < 0x80) return {lead, pos, 1};

  std::size_t length;
  char32_t cp;
  char32_t min;
  if (lead >= 0xC2 && lead <= 0xDF) {
    length = 2, cp = lead & 0x1F, min = 0x80;
  } else if (lead >= 0xE0 && lead <= 0xEF) {
    length = 3, cp = lead & 0x0F, min = 0x800;
  } else if (lead >= 0xF0 && lead <= 0xF4) {
    length = 4, cp = lead & 0x07, min = 0x10000;
  } else {
    return invalid;
  }
  if (remaining < length) return invalid;
  for (std::size_t i = 1; i < length; ++i) {
    const auto b = static_cast<unsigned char>(text[pos + i]);
    if (!is_continuation(b)) return invalid;
    cp = (cp << 6) | (b & 0x3F);
  }
  // Overlong forms, surrogates, and values past U+10FFFF.
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return invalid;
  return {cp, pos, length};
}

std::vector<Codepoint> codepoints(std::string_view text) {
  std::vector<Codepoint> out;
  out.reserve(text.size());
  for (std::size_t pos = 0; pos < text.size();) {
    const Codepoint cp = decode_at(text, pos);
    out.push_back(cp);
    pos += cp.length;
  }
  return out;
}

std::size_t first_invalid(std::string_view text) {
  for (std::size_t pos = 0; pos < text.size();) {
    const Codepoint cp = decode_at(text, pos);
    if (cp.value == kReplacement && cp.length == 1 && static_cast<unsigned char>(text[pos]) >= 0x80)
      return pos;
    pos += cp.length;
  }
  return std::string_view::npos;
}

bool is_valid(std::string_view text) { return first_invalid(text) == std::string_view::npos; }

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode(char32_t cp) {
  std::string out;
  append(out, cp);
  return out;
}

bool is_whitespace(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)); }

std::vector<std::string_view> split_whitespace_views(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = std::string_view::npos;
  for (std::size_t pos = 0; pos < text.size();) {
    const Codepoint cp = decode_at(text, pos);
    if (is_whitespace(cp.value)) {
      if (start != std::string_view::npos) out.push_back(text.substr(start, pos - start));
      start = std::string_view::npos;
    } else if (start == std::string_view::npos) {
      start = pos;
    }
    pos += cp.length;
  }
  if (start != std::string_view::npos) out.push_back(text.substr(start));
  return out;
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  for (auto piece : split_whitespace_views(text)) out.emplace_back(piece);
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string_view strip_bom(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  return text;
}

std::vector<std::pair<std::size_t, std::size_t>> grapheme_spans(std::string_view text) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  if (text.empty()) return spans;

  // BreakIterator is not thread-safe; one instance per thread.
  thread_local std::unique_ptr<icu::BreakIterator> iter = [] {
    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<icu::BreakIterator> it(
        icu::BreakIterator::createCharacterInstance(icu::Locale::getRoot(), status));
    if (U_FAILURE(status)) throw Error(std::string("ICU grapheme iterator: ") + u_errorName(status));
    return it;
  }();

  UErrorCode status = U_ZERO_ERROR;
  UText* ut = utext_openUTF8(nullptr, text.data(), static_cast<int64_t>(text.size()), &status);
  if (U_FAILURE(status)) throw Error(std::string("ICU utext: ") + u_errorName(status));
  iter->setText(ut, status);
  if (U_FAILURE(status)) {
    utext_close(ut);
    throw Error(std::string("ICU setText: ") + u_errorName(status));
  }
  int32_t start = iter->first();
  for (int32_t end = iter->next(); end != icu::BreakIterator::DONE; end = iter->next()) {
    spans.emplace_back(static_cast<std::size_t>(start), static_cast<std::size_t>(end));
    start = end;
  }
  // Detach before the UText goes away.
  UText* empty = utext_openUTF8(nullptr, "", 0, &status);
  iter->setText(empty, status);
  utext_close(ut);
  utext_close(empty);
  return spans;
}

}  // namespace argenkit::utf8

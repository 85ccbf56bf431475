#include "argenkit/normalize.hpp"

#include <unicode/uchar.h>

#include <array>
#include <cctype>

#include "argenkit/error.hpp"
#include "argenkit/utf8.hpp"

namespace argenkit::text {

namespace {

constexpr std::array<std::pair<Rule, std::string_view>, 7> kRuleNames{{
    {Rule::kHtml, "html"},
    {Rule::kUrls, "urls"},
    {Rule::kMentions, "mentions"},
    {Rule::kDiacritics, "diacritics"},
    {Rule::kTatweel, "tatweel"},
    {Rule::kHash, "hash"},
    {Rule::kRepeats, "repeats"},
}};

bool is_ascii_word(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_';
}

bool starts_with_ci(std::string_view text, std::size_t pos, std::string_view prefix) {
  if (text.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[pos + i])) != prefix[i]) return false;
  }
  return true;
}

bool ends_url(char c) {
  return c == '<' || c == '>' || c == '"' || std::isspace(static_cast<unsigned char>(c));
}

// Length of the URL starting at `pos`, or 0.
std::size_t match_url(std::string_view text, std::size_t pos) {
  if (pos > 0 && is_ascii_word(text[pos - 1])) return 0;

  std::size_t prefix = 0;
  if (starts_with_ci(text, pos, "https://")) {
    prefix = 8;
  } else if (starts_with_ci(text, pos, "http://")) {
    prefix = 7;
  } else if (starts_with_ci(text, pos, "www.")) {
    prefix = 4;
  } else {
    return 0;
  }

  std::size_t end = pos + prefix;
  // Stop at whitespace, including non-ASCII whitespace.
  while (end < text.size() && !ends_url(text[end])) {
    const auto cp = utf8::decode_at(text, end);
    if (utf8::is_whitespace(cp.value)) break;
    end += cp.length;
  }

  // Trailing sentence punctuation belongs to the surrounding text; closing
  // brackets only when the URL has no matching opener.
  auto count = [&](char c) {
    std::size_t n = 0;
    for (std::size_t i = pos; i < end; ++i) n += text[i] == c;
    return n;
  };
  while (end > pos + prefix) {
    const char last = text[end - 1];
    if (std::string_view(".,;:!?'").find(last) != std::string_view::npos) {
      --end;
    } else if ((last == ')' && count(')') > count('(')) || (last == ']' && count(']') > count('[')) ||
               (last == '}' && count('}') > count('{'))) {
      --end;
    } else {
      break;
    }
  }

  if (end == pos + prefix) return 0;
  if (prefix == 4 && !std::isalnum(static_cast<unsigned char>(text[pos + 4]))) return 0;
  return end - pos;
}

bool is_mention_char(char32_t cp) {
  if (cp == '_') return true;
  const auto c = static_cast<UChar32>(cp);
  return u_isalpha(c) || u_isdigit(c) || u_charType(c) == U_NON_SPACING_MARK;
}

std::size_t match_mention(std::string_view text, std::size_t pos) {
  if (text[pos] != '@') return 0;
  if (pos > 0) {
    // Skip e-mail addresses and similar word-internal uses.
    std::size_t prev = pos - 1;
    while (prev > 0 && (static_cast<unsigned char>(text[prev]) & 0xC0) == 0x80) --prev;
    if (is_mention_char(utf8::decode_at(text, prev).value)) return 0;
  }
  std::size_t end = pos + 1;
  while (end < text.size()) {
    const auto cp = utf8::decode_at(text, end);
    if (!is_mention_char(cp.value)) break;
    end += cp.length;
  }
  return end > pos + 1 ? end - pos : 0;
}

template <typename Keep>
std::string filter_codepoints(std::string_view text, Keep keep) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t pos = 0; pos < text.size();) {
    const auto cp = utf8::decode_at(text, pos);
    if (keep(cp.value)) out.append(text.substr(pos, cp.length));
    pos += cp.length;
  }
  return out;
}

bool is_tag_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == ':';
}

// Length of the HTML tag or comment starting at `pos`, or 0.
std::size_t match_tag(std::string_view text, std::size_t pos) {
  if (text[pos] != '<') return 0;
  const std::string_view rest = text.substr(pos);
  if (rest.starts_with(kUrlToken) || rest.starts_with(kUserToken)) return 0;

  if (rest.starts_with("<!--")) {
    const auto close = rest.find("-->", 4);
    return close == std::string_view::npos ? 0 : close + 3;
  }

  std::size_t i = 1;
  if (i < rest.size() && (rest[i] == '/' || rest[i] == '!')) ++i;
  if (i >= rest.size() || !std::isalpha(static_cast<unsigned char>(rest[i]))) return 0;
  while (i < rest.size() && is_tag_name_char(rest[i])) ++i;
  if (i >= rest.size()) return 0;

  if (rest[i] == '>') return i + 1;
  if (rest[i] == '/' && i + 1 < rest.size() && rest[i + 1] == '>') return i + 2;
  if (!std::isspace(static_cast<unsigned char>(rest[i]))) return 0;
  while (i < rest.size() && rest[i] != '>' && rest[i] != '<') ++i;
  return i < rest.size() && rest[i] == '>' ? i + 1 : 0;
}

template <typename Matcher>
std::string replace_matches(std::string_view text, Matcher match, std::string_view replacement) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t pos = 0; pos < text.size();) {
    if (const std::size_t n = match(text, pos)) {
      out += replacement;
      pos += n;
    } else {
      out.push_back(text[pos]);
      ++pos;
    }
  }
  return out;
}

}  // namespace

std::string_view rule_name(Rule rule) {
  for (const auto& [r, name] : kRuleNames)
    if (r == rule) return name;
  return "?";
}

Rule parse_rule(std::string_view name) {
  for (const auto& [rule, n] : kRuleNames)
    if (n == name) return rule;
  throw InvalidArgument("unknown normalization rule '" + std::string(name) +
                        "' (expected html, urls, mentions, diacritics, tatweel, hash, repeats)");
}

NormalizationConfig NormalizationConfig::none() {
  NormalizationConfig c;
  c.strip_html = c.mask_urls = c.mask_mentions = c.strip_diacritics = false;
  c.remove_tatweel = c.strip_hash_signs = c.squeeze_repeats = false;
  return c;
}

NormalizationConfig NormalizationConfig::only(const std::vector<Rule>& rules, int repeat_threshold) {
  NormalizationConfig c = none();
  c.repeat_threshold = repeat_threshold;
  for (Rule r : rules) {
    switch (r) {
      case Rule::kHtml: c.strip_html = true; break;
      case Rule::kUrls: c.mask_urls = true; break;
      case Rule::kMentions: c.mask_mentions = true; break;
      case Rule::kDiacritics: c.strip_diacritics = true; break;
      case Rule::kTatweel: c.remove_tatweel = true; break;
      case Rule::kHash: c.strip_hash_signs = true; break;
      case Rule::kRepeats: c.squeeze_repeats = true; break;
    }
  }
  return c;
}

void NormalizationConfig::validate() const {
  if (repeat_threshold < 2)
    throw InvalidArgument("repeat_threshold must be >= 2, got " + std::to_string(repeat_threshold));
}

bool is_arabic_diacritic(char32_t cp) { return (cp >= 0x064B && cp <= 0x065F) || cp == 0x0670; }

std::string strip_diacritics(std::string_view text) {
  return filter_codepoints(text, [](char32_t cp) { return !is_arabic_diacritic(cp); });
}

std::string remove_tatweel(std::string_view text) {
  return filter_codepoints(text, [](char32_t cp) { return cp != kTatweel; });
}

std::string mask_urls(std::string_view text) { return replace_matches(text, match_url, kUrlToken); }

std::string mask_mentions(std::string_view text) {
  return replace_matches(text, match_mention, kUserToken);
}

std::string mask_entities(std::string_view text) { return mask_mentions(mask_urls(text)); }

std::string squeeze_repeats(std::string_view text, int threshold) {
  if (threshold < 2) throw InvalidArgument("repeat threshold must be >= 2");
  const auto spans = utf8::grapheme_spans(text);
  std::string out;
  out.reserve(text.size());
  auto cluster = [&](std::size_t i) {
    return text.substr(spans[i].first, spans[i].second - spans[i].first);
  };
  for (std::size_t i = 0; i < spans.size();) {
    std::size_t j = i + 1;
    while (j < spans.size() && cluster(j) == cluster(i)) ++j;
    const std::size_t run = j - i;
    if (run >= static_cast<std::size_t>(threshold)) {
      out += cluster(i);
    } else {
      out.append(text.substr(spans[i].first, spans[j - 1].second - spans[i].first));
    }
    i = j;
  }
  return out;
}

std::string strip_html_tags(std::string_view text) {
  std::string current(text);
  // Removing one tag can expose another ("<<b>i>"), so repeat to a fixed point.
  for (;;) {
    std::string next = replace_matches(current, match_tag, "");
    if (next == current) return next;
    current = std::move(next);
  }
}

std::string strip_hash_signs(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text)
    if (c != '#') out.push_back(c);
  return out;
}

std::string strip_markup(std::string_view text) { return strip_hash_signs(strip_html_tags(text)); }

CleanText normalize(std::string_view text, const NormalizationConfig& config) {
  config.validate();

  CleanText result;
  auto enabled = [&](Rule r, bool on) {
    if (on) result.applied_rules.push_back(r);
  };
  enabled(Rule::kHtml, config.strip_html);
  enabled(Rule::kUrls, config.mask_urls);
  enabled(Rule::kMentions, config.mask_mentions);
  enabled(Rule::kDiacritics, config.strip_diacritics);
  enabled(Rule::kTatweel, config.remove_tatweel);
  enabled(Rule::kHash, config.strip_hash_signs);
  enabled(Rule::kRepeats, config.squeeze_repeats);

  auto masking_pass = [&](std::string s) {
    if (config.strip_html) s = strip_html_tags(s);
    if (config.mask_urls) s = mask_urls(s);
    if (config.mask_mentions) s = mask_mentions(s);
    if (config.strip_diacritics) s = strip_diacritics(s);
    if (config.remove_tatweel) s = remove_tatweel(s);
    if (config.strip_hash_signs) s = strip_hash_signs(s);
    return s;
  };
  auto fixed_point = [](std::string s, auto&& step) {
    for (int i = 0; i < 32; ++i) {
      std::string next = step(s);
      if (next == s) break;
      s = std::move(next);
    }
    return s;
  };

  // Masking settles before repeats are squeezed.
  result.text = fixed_point(std::string(text), [&](const std::string& s) {
    std::string t = fixed_point(s, masking_pass);
    if (config.squeeze_repeats) t = squeeze_repeats(t, config.repeat_threshold);
    return t;
  });
  return result;
}

}  // namespace argenkit::text

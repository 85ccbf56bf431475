#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace argenkit::text {

inline constexpr std::string_view kUrlToken = "<URL>";
inline constexpr std::string_view kUserToken = "<USER>";
inline constexpr char32_t kTatweel = 0x0640;

// Rule identifiers, listed in application order.
enum class Rule { kHtml, kUrls, kMentions, kDiacritics, kTatweel, kHash, kRepeats };

std::string_view rule_name(Rule rule);
Rule parse_rule(std::string_view name);  // throws InvalidArgument

struct NormalizationConfig {
  bool strip_html = true;
  bool mask_urls = true;
  bool mask_mentions = true;
  bool strip_diacritics = true;
  bool remove_tatweel = true;
  bool strip_hash_signs = true;
  bool squeeze_repeats = true;
  int repeat_threshold = 3;

  // Config with only the named rules enabled.
  static NormalizationConfig only(const std::vector<Rule>& rules, int repeat_threshold = 3);
  static NormalizationConfig none();

  void validate() const;
};

struct CleanText {
  std::string text;
  std::vector<Rule> applied_rules;
};

// Harakat and related marks: U+064B..U+065F and U+0670 (superscript alef).
bool is_arabic_diacritic(char32_t cp);

std::string strip_diacritics(std::string_view text);
std::string remove_tatweel(std::string_view text);

std::string mask_urls(std::string_view text);
std::string mask_mentions(std::string_view text);
// URLs become <URL>, @-mentions become <USER>.
std::string mask_entities(std::string_view text);

// Collapses every maximal run of >= threshold identical grapheme clusters to
// a single cluster.
std::string squeeze_repeats(std::string_view text, int threshold);

// Removes spans matching the HTML tag grammar (plus comments). Stray `<`
// and the reserved <URL>/<USER> placeholders are left alone.
std::string strip_html_tags(std::string_view text);
std::string strip_hash_signs(std::string_view text);
std::string strip_markup(std::string_view text);

// Applies the enabled rules in the fixed order html, urls, mentions,
// diacritics, tatweel, hash, repeats. Passes repeat until the text is
// stable, so the result is a fixed point of the pipeline.
CleanText normalize(std::string_view text, const NormalizationConfig& config = {});

}  // namespace argenkit::text

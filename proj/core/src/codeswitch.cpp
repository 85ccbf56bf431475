#include "argenkit/codeswitch.hpp"

#include <unicode/uchar.h>
#include <unicode/uscript.h>

#include <algorithm>

#include "argenkit/error.hpp"
#include "argenkit/utf8.hpp"

namespace argenkit::cs {

bool is_arabic_codepoint(char32_t cp) {
  return (cp >= 0x0600 && cp <= 0x06FF) || (cp >= 0x0750 && cp <= 0x077F) || (cp >= 0xFB50 && cp <= 0xFDFF) ||
         (cp >= 0xFE70 && cp <= 0xFEFF);
}

bool contains_arabic(std::string_view token) {
  for (std::size_t pos = 0; pos < token.size();) {
    const auto cp = utf8::decode_at(token, pos);
    if (is_arabic_codepoint(cp.value)) return true;
    pos += cp.length;
  }
  return false;
}

void CSConfig::validate() const {
  if (!(coverage >= 0.0 && coverage <= 1.0))
    throw InvalidArgument("coverage must lie in [0, 1], got " + std::to_string(coverage));
  if (ngram_min < 1 || ngram_min > ngram_max)
    throw InvalidArgument("n-gram range must satisfy 1 <= min <= max, got " + std::to_string(ngram_min) + ":" +
                          std::to_string(ngram_max));
}

std::size_t CSExample::replaced_token_count() const {
  std::size_t n = 0;
  for (const auto& s : replaced_spans) n += s.length;
  return n;
}

double CSExample::replaced_fraction() const {
  return source_tokens.empty() ? 0.0
                               : static_cast<double>(replaced_token_count()) / static_cast<double>(source_tokens.size());
}

std::string CSExample::mixed_text() const { return utf8::join(mixed_tokens); }

SpanTranslationError::SpanTranslationError(std::size_t start_, std::size_t length_, std::string phrase_,
                                           const std::string& cause)
    : TranslationError("translation failed for span [" + std::to_string(start_) + ", +" + std::to_string(length_) +
                       ") '" + phrase_ + "': " + cause),
      start(start_),
      length(length_),
      phrase(std::move(phrase_)) {}

std::vector<std::pair<std::size_t, std::size_t>> sample_spans(const Tokens& tokens, const CSConfig& config, Rng& rng,
                                                              bool* under_coverage) {
  config.validate();
  const std::size_t n = tokens.size();
  const double goal = config.coverage * static_cast<double>(n);

  // Blocked positions: already covered, or ineligible under arabic_only.
  std::vector<bool> blocked(n, false);
  if (config.arabic_only)
    for (std::size_t i = 0; i < n; ++i) blocked[i] = !contains_arabic(tokens[i]);

  std::vector<std::size_t> lengths;
  for (std::size_t len = config.ngram_min; len <= config.ngram_max; ++len) lengths.push_back(len);

  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::size_t covered = 0;
  std::vector<std::size_t> starts;
  while (static_cast<double>(covered) < goal && !lengths.empty()) {
    const std::size_t pick = rng.uniform_int(0, lengths.size() - 1);
    const std::size_t len = lengths[pick];

    starts.clear();
    std::size_t free_run = 0;  // free positions ending at i
    for (std::size_t i = 0; i < n; ++i) {
      free_run = blocked[i] ? 0 : free_run + 1;
      if (free_run >= len) starts.push_back(i + 1 - len);
    }
    if (starts.empty()) {
      lengths.erase(lengths.begin() + static_cast<std::ptrdiff_t>(pick));
      continue;
    }
    const std::size_t start = starts[rng.uniform_int(0, starts.size() - 1)];
    for (std::size_t i = start; i < start + len; ++i) blocked[i] = true;
    spans.emplace_back(start, len);
    covered += len;
  }
  if (under_coverage) *under_coverage = static_cast<double>(covered) < goal;
  std::sort(spans.begin(), spans.end());
  return spans;
}

CSExample apply_spans(const Tokens& tokens, std::vector<std::pair<std::size_t, std::size_t>> spans,
                      const Translator& translator, std::string_view target_lang) {
  std::sort(spans.begin(), spans.end());
  CSExample ex;
  ex.source_tokens = tokens;
  std::size_t pos = 0;
  for (const auto& [start, length] : spans) {
    if (length == 0 || start < pos || start + length > tokens.size())
      throw InvalidArgument("replacement spans must be non-empty, in range and disjoint");
    ex.mixed_tokens.insert(ex.mixed_tokens.end(), tokens.begin() + static_cast<std::ptrdiff_t>(pos),
                           tokens.begin() + static_cast<std::ptrdiff_t>(start));
    std::vector<std::string> words(tokens.begin() + static_cast<std::ptrdiff_t>(start),
                                   tokens.begin() + static_cast<std::ptrdiff_t>(start + length));
    std::string phrase = utf8::join(words);
    std::string replacement;
    try {
      replacement = translator.translate(phrase, target_lang);
    } catch (const std::exception& e) {
      throw SpanTranslationError(start, length, phrase, e.what());
    }
    if (replacement.empty()) throw SpanTranslationError(start, length, phrase, "translator returned an empty string");
    ex.mixed_tokens.push_back(replacement);
    ex.replaced_spans.push_back({start, length, std::move(replacement)});
    pos = start + length;
  }
  ex.mixed_tokens.insert(ex.mixed_tokens.end(), tokens.begin() + static_cast<std::ptrdiff_t>(pos), tokens.end());
  return ex;
}

CSExample synthesize(const Tokens& tokens, const Translator& translator, const CSConfig& config, Rng& rng) {
  if (tokens.empty()) throw InvalidArgument("cannot code-switch an empty token sequence");
  bool under = false;
  auto spans = sample_spans(tokens, config, rng, &under);
  CSExample ex = apply_spans(tokens, std::move(spans), translator, config.target_lang);
  ex.under_coverage = under;
  return ex;
}

CSExample synthesize(const Tokens& tokens, const Translator& translator, const CSConfig& config,
                     std::uint64_t index) {
  Rng rng = Rng::for_example(config.seed, index);
  return synthesize(tokens, translator, config, rng);
}

std::string ScriptIdentifier::identify(std::string_view token) const {
  for (std::size_t pos = 0; pos < token.size();) {
    const auto cp = utf8::decode_at(token, pos);
    if (u_isalpha(static_cast<UChar32>(cp.value))) {
      UErrorCode status = U_ZERO_ERROR;
      const UScriptCode script = uscript_getScript(static_cast<UChar32>(cp.value), &status);
      if (U_SUCCESS(status)) return uscript_getShortName(script);
    }
    pos += cp.length;
  }
  return "Zyyy";
}

CodeSwitchStats& CodeSwitchStats::operator+=(const CodeSwitchStats& other) {
  tokens += other.tokens;
  non_arabic += other.non_arabic;
  for (const auto& [lang, n] : other.by_language) by_language[lang] += n;
  return *this;
}

CodeSwitchStats code_switch_stats(std::string_view text, const ArabicDetector& detector,
                                  const LanguageIdentifier* lid) {
  CodeSwitchStats stats;
  for (auto token : utf8::split_whitespace_views(text)) {
    ++stats.tokens;
    if (detector(token)) continue;
    ++stats.non_arabic;
    if (lid) ++stats.by_language[lid->identify(token)];
  }
  return stats;
}

double code_switch_rate(std::string_view text, const ArabicDetector& detector, const LanguageIdentifier* lid) {
  return code_switch_stats(text, detector, lid).rate();
}

bool has_min_arabic_words(std::string_view text, std::size_t k) {
  if (k == 0) return true;
  std::size_t count = 0;
  for (auto token : utf8::split_whitespace_views(text))
    if (contains_arabic(token) && ++count >= k) return true;
  return false;
}

}  // namespace argenkit::cs

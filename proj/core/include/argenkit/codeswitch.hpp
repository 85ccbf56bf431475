#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "argenkit/rng.hpp"
#include "argenkit/translator.hpp"

namespace argenkit::cs {

using Tokens = std::vector<std::string>;

// Arabic script blocks: U+0600-06FF, U+0750-077F and the presentation forms
// U+FB50-FDFF, U+FE70-FEFF.
bool is_arabic_codepoint(char32_t cp);
bool contains_arabic(std::string_view token);

struct CSConfig {
  double coverage = 0.30;
  std::size_t ngram_min = 1;
  std::size_t ngram_max = 3;
  std::string target_lang = "en";
  std::uint64_t seed = 0;
  // Only spans made entirely of Arabic-script tokens are eligible.
  bool arabic_only = true;

  void validate() const;
};

struct ReplacedSpan {
  std::size_t start;
  std::size_t length;
  std::string replacement;

  bool operator==(const ReplacedSpan&) const = default;
};

struct CSExample {
  Tokens source_tokens;
  // Source tokens with every replaced span collapsed to its translation.
  Tokens mixed_tokens;
  std::vector<ReplacedSpan> replaced_spans;  // sorted by start, disjoint
  bool under_coverage = false;

  std::size_t replaced_token_count() const;
  double replaced_fraction() const;
  std::string mixed_text() const;
};

// A translator failed on one span.
class SpanTranslationError : public TranslationError {
 public:
  SpanTranslationError(std::size_t start, std::size_t length, std::string phrase, const std::string& cause);
  std::size_t start;
  std::size_t length;
  std::string phrase;
};

// Picks spans: a length uniform in [ngram_min, ngram_max], then a start
// uniform over the positions where that span fits without overlapping an
// earlier one. Lengths with no admissible start are retired. Stops once
// covered tokens >= coverage * |tokens| or no length remains.
// Returned spans are sorted by start.
std::vector<std::pair<std::size_t, std::size_t>> sample_spans(const Tokens& tokens, const CSConfig& config,
                                                              Rng& rng, bool* under_coverage = nullptr);

// Replaces the given (start, length) spans with their translations.
CSExample apply_spans(const Tokens& tokens, std::vector<std::pair<std::size_t, std::size_t>> spans,
                      const Translator& translator, std::string_view target_lang);

CSExample synthesize(const Tokens& tokens, const Translator& translator, const CSConfig& config, Rng& rng);
CSExample synthesize(const Tokens& tokens, const Translator& translator, const CSConfig& config,
                     std::uint64_t index);

// Token-level Arabic test used by the rate measurement.
using ArabicDetector = std::function<bool(std::string_view token)>;

// Language-ID port for the non-Arabic portion.
class LanguageIdentifier {
 public:
  virtual ~LanguageIdentifier() = default;
  virtual std::string identify(std::string_view token) const = 0;
};

// Labels a token with the ICU short script code of its first letter
// ("Latn", "Cyrl", ...), or "Zyyy" when it has no letters.
class ScriptIdentifier final : public LanguageIdentifier {
 public:
  std::string identify(std::string_view token) const override;
};

struct CodeSwitchStats {
  std::size_t tokens = 0;
  std::size_t non_arabic = 0;
  std::map<std::string, std::size_t> by_language;  // filled when a LID port is given

  double rate() const { return tokens == 0 ? 0.0 : static_cast<double>(non_arabic) / static_cast<double>(tokens); }
  CodeSwitchStats& operator+=(const CodeSwitchStats& other);
};

CodeSwitchStats code_switch_stats(std::string_view text, const ArabicDetector& detector = contains_arabic,
                                  const LanguageIdentifier* lid = nullptr);

// Fraction of whitespace tokens with no Arabic-script codepoint; 0 for
// empty text.
double code_switch_rate(std::string_view text, const ArabicDetector& detector = contains_arabic,
                        const LanguageIdentifier* lid = nullptr);

// True iff at least k whitespace tokens contain an Arabic-script codepoint.
bool has_min_arabic_words(std::string_view text, std::size_t k = 3);

}  // namespace argenkit::cs

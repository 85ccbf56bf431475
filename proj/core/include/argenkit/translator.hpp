#pragma once

#include <string>
#include <string_view>
#include <unordered_map>

#include "argenkit/error.hpp"

namespace argenkit {

class TranslationError : public Error {
 public:
  using Error::Error;
};

// Machine-translation port. Implementations must be deterministic and never
// return an empty string for non-empty input; failures throw
// TranslationError.
class Translator {
 public:
  virtual ~Translator() = default;
  virtual std::string translate(std::string_view phrase, std::string_view target_lang) const = 0;
  // Callers serialize translate() when this is false.
  virtual bool thread_safe() const { return true; }
};

// Phrase table loaded from a two-column TSV (source phrase, translation).
// Lookup tries the whole phrase first, then falls back to word-by-word
// translation. Unknown words are an error unless keep_unknown is set, in
// which case they pass through unchanged.
class DictionaryTranslator final : public Translator {
 public:
  DictionaryTranslator() = default;
  explicit DictionaryTranslator(std::unordered_map<std::string, std::string> entries, bool keep_unknown = false);

  static DictionaryTranslator load_tsv(const std::string& path, bool keep_unknown = false);
  static DictionaryTranslator parse_tsv(std::string_view content, bool keep_unknown = false);

  void add(std::string source, std::string translation);
  std::size_t size() const { return entries_.size(); }

  std::string translate(std::string_view phrase, std::string_view target_lang) const override;

 private:
  std::unordered_map<std::string, std::string> entries_;
  bool keep_unknown_ = false;
};

// Wraps the phrase as "[lang:phrase]" so replaced spans are visible.
class EchoTranslator final : public Translator {
 public:
  std::string translate(std::string_view phrase, std::string_view target_lang) const override;
};

}  // namespace argenkit

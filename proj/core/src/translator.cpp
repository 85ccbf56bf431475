#include "argenkit/translator.hpp"

#include <fstream>
#include <sstream>

#include "argenkit/utf8.hpp"

namespace argenkit {

DictionaryTranslator::DictionaryTranslator(std::unordered_map<std::string, std::string> entries, bool keep_unknown)
    : entries_(std::move(entries)), keep_unknown_(keep_unknown) {}

void DictionaryTranslator::add(std::string source, std::string translation) {
  entries_.insert_or_assign(std::move(source), std::move(translation));
}

DictionaryTranslator DictionaryTranslator::parse_tsv(std::string_view content, bool keep_unknown) {
  DictionaryTranslator dict({}, keep_unknown);
  content = utf8::strip_bom(content);
  std::size_t line_no = 0;
  while (!content.empty()) {
    ++line_no;
    const auto nl = content.find('\n');
    std::string_view line = content.substr(0, nl);
    content = nl == std::string_view::npos ? std::string_view{} : content.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos)
      throw DataError("dictionary line " + std::to_string(line_no) + ": expected two tab-separated columns");
    const auto source = line.substr(0, tab);
    const auto target = line.substr(tab + 1);
    if (source.empty() || target.empty())
      throw DataError("dictionary line " + std::to_string(line_no) + ": empty column");
    dict.add(std::string(source), std::string(target));
  }
  return dict;
}

DictionaryTranslator DictionaryTranslator::load_tsv(const std::string& path, bool keep_unknown) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dictionary " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_tsv(buf.str(), keep_unknown);
}

std::string DictionaryTranslator::translate(std::string_view phrase, std::string_view) const {
  if (auto it = entries_.find(std::string(phrase)); it != entries_.end()) return it->second;
  const auto words = utf8::split_whitespace_views(phrase);
  if (words.empty()) throw TranslationError("cannot translate an empty phrase");
  std::string out;
  for (auto w : words) {
    if (!out.empty()) out += ' ';
    if (auto it = entries_.find(std::string(w)); it != entries_.end()) {
      out += it->second;
    } else if (keep_unknown_) {
      out += w;
    } else {
      throw TranslationError("no dictionary entry for '" + std::string(w) + "'");
    }
  }
  return out;
}

std::string EchoTranslator::translate(std::string_view phrase, std::string_view target_lang) const {
  if (phrase.empty()) throw TranslationError("cannot translate an empty phrase");
  return "[" + std::string(target_lang) + ":" + std::string(phrase) + "]";
}

}  // namespace argenkit

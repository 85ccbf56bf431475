#include "argenkit/tokenizer.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "argenkit/error.hpp"
#include "argenkit/utf8.hpp"
#include "json.hpp"

namespace argenkit::tok {

namespace {

constexpr std::string_view kSentinelPrefix = "<extra_id_";

// Pieces are arbitrary byte strings. In the model file a piece is stored
// verbatim when it is valid UTF-8 and free of "<0x"; otherwise every byte is
// written as <0xHH>. The two forms cannot collide.
std::string escape_piece(std::string_view bytes) {
  if (utf8::is_valid(bytes) && bytes.find("<0x") == std::string_view::npos) return std::string(bytes);
  std::string out;
  char buf[8];
  for (unsigned char b : bytes) {
    std::snprintf(buf, sizeof buf, "<0x%02X>", b);
    out += buf;
  }
  return out;
}

std::string unescape_piece(std::string_view text) {
  if (text.empty() || text.size() % 6 != 0) return std::string(text);
  std::string out;
  for (std::size_t i = 0; i < text.size(); i += 6) {
    const std::string_view chunk = text.substr(i, 6);
    if (!chunk.starts_with("<0x") || chunk[5] != '>') return std::string(text);
    unsigned value = 0;
    const auto hex = chunk.substr(3, 2);
    if (!std::all_of(hex.begin(), hex.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)) && !std::islower(static_cast<unsigned char>(c)); }))
      return std::string(text);
    std::from_chars(hex.data(), hex.data() + 2, value, 16);
    out.push_back(static_cast<char>(value));
  }
  return out;
}

}  // namespace

std::string sentinel(std::size_t index) {
  return std::string(kSentinelPrefix) + std::to_string(index) + ">";
}

long sentinel_index(std::string_view token) {
  if (!token.starts_with(kSentinelPrefix) || !token.ends_with(">")) return -1;
  const auto digits = token.substr(kSentinelPrefix.size(), token.size() - kSentinelPrefix.size() - 1);
  if (digits.empty() || (digits.size() > 1 && digits[0] == '0')) return -1;
  long value = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return -1;
  return value;
}

std::vector<std::string> default_specials(std::size_t sentinels) {
  std::vector<std::string> out{"<pad>", "<unk>", "<URL>", "<USER>"};
  for (std::size_t i = 0; i < sentinels; ++i) out.push_back(sentinel(i));
  return out;
}

std::vector<Segment> segment_text(std::string_view text, const std::vector<std::string>& specials) {
  std::vector<Segment> out;

  // Leftmost-longest special match at `pos`.
  auto special_at = [&](std::size_t pos) -> std::size_t {
    std::size_t best = 0;
    for (const auto& s : specials)
      if (s.size() > best && text.substr(pos).starts_with(s)) best = s.size();
    return best;
  };

  auto segment_plain = [&](std::size_t begin, std::size_t end) {
    const std::string_view region = text.substr(0, end);
    std::size_t pos = begin;
    auto non_ws_run = [&](std::size_t p) {
      while (p < end) {
        const auto cp = utf8::decode_at(region, p);
        if (utf8::is_whitespace(cp.value)) break;
        p += cp.length;
      }
      return p;
    };
    while (pos < end) {
      const auto cp = utf8::decode_at(region, pos);
      if (cp.value == ' ' && pos + 1 < end && !utf8::is_whitespace(utf8::decode_at(region, pos + 1).value)) {
        const std::size_t stop = non_ws_run(pos + 1);
        out.push_back({pos, stop - pos, false});
        pos = stop;
      } else if (utf8::is_whitespace(cp.value)) {
        out.push_back({pos, cp.length, false});
        pos += cp.length;
      } else {
        const std::size_t stop = non_ws_run(pos);
        out.push_back({pos, stop - pos, false});
        pos = stop;
      }
    }
  };

  std::size_t plain_start = 0;
  for (std::size_t pos = 0; pos < text.size();) {
    if (const std::size_t n = special_at(pos)) {
      segment_plain(plain_start, pos);
      out.push_back({pos, n, true});
      pos += n;
      plain_start = pos;
    } else {
      ++pos;
    }
  }
  segment_plain(plain_start, text.size());
  return out;
}

SubwordModel::SubwordModel(std::vector<std::string> specials) {
  std::unordered_set<std::string> seen;
  for (auto& s : specials) {
    if (s.empty()) throw InvalidArgument("special tokens must be non-empty");
    if (!seen.insert(s).second) throw InvalidArgument("duplicate special token '" + s + "'");
    special_ids_.emplace(s, static_cast<TokenId>(pieces_.size()));
    pieces_.push_back(std::move(s));
  }
  specials_count_ = pieces_.size();
  for (int b = 0; b < 256; ++b) add_piece(std::string(1, static_cast<char>(b)));
}

std::vector<std::string> SubwordModel::specials() const {
  return {pieces_.begin(), pieces_.begin() + static_cast<std::ptrdiff_t>(specials_count_)};
}

TokenId SubwordModel::add_piece(std::string bytes) {
  if (auto it = piece_ids_.find(bytes); it != piece_ids_.end()) return it->second;
  const auto id = static_cast<TokenId>(pieces_.size());
  piece_ids_.emplace(bytes, id);
  pieces_.push_back(std::move(bytes));
  return id;
}

void SubwordModel::add_merge(TokenId left, TokenId right) {
  const TokenId output = add_piece(pieces_[left] + pieces_[right]);
  merge_rank_.emplace(pair_key(left, right), std::make_pair(static_cast<std::uint32_t>(merges_.size()), output));
  merges_.push_back({left, right, output});
}

std::vector<std::pair<TokenId, TokenId>> SubwordModel::merge_pairs() const {
  std::vector<std::pair<TokenId, TokenId>> out;
  out.reserve(merges_.size());
  for (const auto& m : merges_) out.emplace_back(m.left, m.right);
  return out;
}

TokenId SubwordModel::id_of_special(std::string_view literal) const {
  auto it = special_ids_.find(std::string(literal));
  if (it == special_ids_.end()) throw DataError("unknown special token '" + std::string(literal) + "'");
  return it->second;
}

TokenId SubwordModel::id_of_piece(std::string_view bytes) const {
  auto it = piece_ids_.find(std::string(bytes));
  if (it == piece_ids_.end()) throw DataError("unknown piece '" + escape_piece(bytes) + "'");
  return it->second;
}

const std::string& SubwordModel::piece(TokenId id) const {
  if (id >= pieces_.size()) throw DataError("unknown token id " + std::to_string(id));
  return pieces_[id];
}

void SubwordModel::encode_segment(std::string_view segment, std::size_t base, EncodedSeq& out) const {
  struct Sym {
    TokenId id;
    std::size_t begin;
    std::size_t end;
  };
  std::vector<Sym> syms;
  syms.reserve(segment.size());
  for (std::size_t i = 0; i < segment.size(); ++i)
    syms.push_back({byte_id(static_cast<unsigned char>(segment[i])), i, i + 1});

  // Repeatedly merge every occurrence of the lowest-ranked pair present.
  while (syms.size() > 1) {
    std::uint32_t best_rank = UINT32_MAX;
    std::uint64_t best_key = 0;
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
      auto it = merge_rank_.find(pair_key(syms[i].id, syms[i + 1].id));
      if (it != merge_rank_.end() && it->second.first < best_rank) {
        best_rank = it->second.first;
        best_key = it->first;
      }
    }
    if (best_rank == UINT32_MAX) break;
    const TokenId output = merges_[best_rank].output;
    std::vector<Sym> next;
    next.reserve(syms.size());
    for (std::size_t i = 0; i < syms.size(); ++i) {
      if (i + 1 < syms.size() && pair_key(syms[i].id, syms[i + 1].id) == best_key) {
        next.push_back({output, syms[i].begin, syms[i + 1].end});
        ++i;
      } else {
        next.push_back(syms[i]);
      }
    }
    syms = std::move(next);
  }

  for (const auto& s : syms) {
    out.ids.push_back(s.id);
    out.offsets.emplace_back(base + s.begin, base + s.end);
  }
}

EncodedSeq SubwordModel::encode(std::string_view text) const {
  EncodedSeq out;
  const auto specials = this->specials();
  for (const auto& seg : segment_text(text, specials)) {
    const auto piece = text.substr(seg.offset, seg.length);
    if (seg.special) {
      out.ids.push_back(id_of_special(piece));
      out.offsets.emplace_back(seg.offset, seg.offset + seg.length);
    } else {
      encode_segment(piece, seg.offset, out);
    }
  }
  return out;
}

std::string SubwordModel::decode(const std::vector<TokenId>& ids) const {
  std::string out;
  for (TokenId id : ids) out += piece(id);
  return out;
}

SubwordModel SubwordModel::with_merge_prefix(std::size_t count) const {
  SubwordModel copy = *this;
  count = std::min(count, merges_.size());
  copy.merges_.resize(count);
  copy.merge_rank_.clear();
  for (std::uint32_t r = 0; r < count; ++r)
    copy.merge_rank_.emplace(pair_key(copy.merges_[r].left, copy.merges_[r].right),
                             std::make_pair(r, copy.merges_[r].output));
  return copy;
}

std::string SubwordModel::to_json() const {
  nlohmann::ordered_json doc;
  doc["version"] = kModelFormatVersion;
  doc["specials"] = specials();
  auto pieces = nlohmann::json::array();
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    pieces.push_back(i < specials_count_ ? pieces_[i] : escape_piece(pieces_[i]));
  doc["pieces"] = std::move(pieces);
  auto merges = nlohmann::json::array();
  for (const auto& m : merges_)
    merges.push_back({escape_piece(pieces_[m.left]), escape_piece(pieces_[m.right])});
  doc["merges"] = std::move(merges);
  return doc.dump(1);
}

SubwordModel SubwordModel::from_json(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("tokenizer model: ") + e.what());
  }
  try {
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion)
      throw DataError("tokenizer model: unsupported version " + std::to_string(version));

    SubwordModel model(doc.at("specials").get<std::vector<std::string>>());
    const auto& pieces = doc.at("pieces");
    if (pieces.size() < model.pieces_.size())
      throw DataError("tokenizer model: piece list shorter than specials + 256 bytes");
    for (std::size_t i = 0; i < model.pieces_.size(); ++i) {
      const auto stored = pieces[i].get<std::string>();
      const std::string bytes = i < model.specials_count_ ? stored : unescape_piece(stored);
      if (bytes != model.pieces_[i])
        throw DataError("tokenizer model: piece " + std::to_string(i) + " does not match the expected layout");
    }
    for (const auto& m : doc.at("merges")) {
      const auto pair = m.get<std::vector<std::string>>();
      if (pair.size() != 2) throw DataError("tokenizer model: merge must be a [left, right] pair");
      model.add_merge(model.id_of_piece(unescape_piece(pair[0])), model.id_of_piece(unescape_piece(pair[1])));
    }
    if (model.pieces_.size() != pieces.size())
      throw DataError("tokenizer model: merges produce " + std::to_string(model.pieces_.size()) +
                      " pieces but the file lists " + std::to_string(pieces.size()));
    for (std::size_t i = model.specials_count_; i < pieces.size(); ++i) {
      if (unescape_piece(pieces[i].get<std::string>()) != model.pieces_[i])
        throw DataError("tokenizer model: piece " + std::to_string(i) + " does not match its merge");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("tokenizer model: ") + e.what());
  }
}

void SubwordModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write tokenizer model to " + path);
  out << to_json() << '\n';
  if (!out) throw DataError("failed writing tokenizer model to " + path);
}

SubwordModel SubwordModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open tokenizer model " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

SubwordModel train(const std::function<bool(std::string&)>& next_line, std::size_t target_size,
                   const std::vector<std::string>& specials) {
  SubwordModel model(specials);
  if (target_size < model.size())
    throw InvalidArgument("vocabulary size " + std::to_string(target_size) + " is below the floor of " +
                          std::to_string(model.size()) + " (specials + 256 bytes)");

  // Unique segments with their frequencies. std::map keeps word order
  // independent of hashing.
  std::map<std::string, std::int64_t> segment_counts;
  bool any_line = false;
  std::string line;
  while (next_line(line)) {
    any_line = true;
    for (const auto& seg : segment_text(line, specials))
      if (!seg.special) ++segment_counts[line.substr(seg.offset, seg.length)];
  }
  if (!any_line) throw DataError("empty training corpus");

  struct Word {
    std::vector<TokenId> syms;
    std::int64_t freq;
  };
  std::vector<Word> words;
  words.reserve(segment_counts.size());
  for (const auto& [seg, freq] : segment_counts) {
    Word w{{}, freq};
    for (unsigned char b : seg) w.syms.push_back(model.byte_id(b));
    words.push_back(std::move(w));
  }

  using Key = std::uint64_t;
  auto key_of = [](TokenId l, TokenId r) { return (static_cast<Key>(l) << 32) | r; };
  auto left_of = [](Key k) { return static_cast<TokenId>(k >> 32); };
  auto right_of = [](Key k) { return static_cast<TokenId>(k & 0xFFFFFFFFu); };

  const auto& pieces = model.pieces_;
  // Highest count first, then lexicographic (left, right) bytes.
  auto better = [&](const std::pair<std::int64_t, Key>& a, const std::pair<std::int64_t, Key>& b) {
    if (a.first != b.first) return a.first > b.first;
    const auto& al = pieces[left_of(a.second)];
    const auto& bl = pieces[left_of(b.second)];
    if (al != bl) return al < bl;
    const auto& ar = pieces[right_of(a.second)];
    const auto& br = pieces[right_of(b.second)];
    if (ar != br) return ar < br;
    return a.second < b.second;
  };
  std::set<std::pair<std::int64_t, Key>, decltype(better)> queue(better);
  std::unordered_map<Key, std::int64_t> counts;
  std::unordered_map<Key, std::vector<std::size_t>> where;

  for (std::size_t w = 0; w < words.size(); ++w) {
    const auto& syms = words[w].syms;
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
      const Key k = key_of(syms[i], syms[i + 1]);
      counts[k] += words[w].freq;
      auto& list = where[k];
      if (list.empty() || list.back() != w) list.push_back(w);
    }
  }
  for (const auto& [k, c] : counts) queue.emplace(c, k);

  while (model.size() < target_size && !queue.empty()) {
    const auto [count, key] = *queue.begin();
    if (count < 2) break;
    const TokenId left = left_of(key);
    const TokenId right = right_of(key);

    TokenId output;
    if (auto it = model.merge_rank_.find(key); it != model.merge_rank_.end()) {
      // The pair reappeared through a piece that several merges can build;
      // encoding already merges it, so only the word state is updated.
      output = it->second.second;
    } else {
      model.add_merge(left, right);
      output = model.merges_.back().output;
    }

    std::unordered_map<Key, std::int64_t> delta;
    std::vector<std::size_t> affected = std::move(where[key]);
    where.erase(key);
    for (std::size_t w : affected) {
      auto& word = words[w];
      bool present = false;
      for (std::size_t i = 0; i + 1 < word.syms.size(); ++i)
        if (word.syms[i] == left && word.syms[i + 1] == right) present = true;
      if (!present) continue;

      for (std::size_t i = 0; i + 1 < word.syms.size(); ++i)
        delta[key_of(word.syms[i], word.syms[i + 1])] -= word.freq;
      std::vector<TokenId> merged;
      merged.reserve(word.syms.size());
      for (std::size_t i = 0; i < word.syms.size(); ++i) {
        if (i + 1 < word.syms.size() && word.syms[i] == left && word.syms[i + 1] == right) {
          merged.push_back(output);
          ++i;
        } else {
          merged.push_back(word.syms[i]);
        }
      }
      word.syms = std::move(merged);
      for (std::size_t i = 0; i + 1 < word.syms.size(); ++i) {
        const Key k = key_of(word.syms[i], word.syms[i + 1]);
        delta[k] += word.freq;
        auto& list = where[k];
        if (list.empty() || list.back() != w) list.push_back(w);
      }
    }

    for (const auto& [k, d] : delta) {
      if (d == 0) continue;
      auto& c = counts[k];
      if (c > 0) queue.erase({c, k});
      c += d;
      if (c > 0) {
        queue.emplace(c, k);
      } else {
        counts.erase(k);
      }
    }
  }
  return model;
}

SubwordModel train(const std::vector<std::string>& corpus, std::size_t target_size,
                   const std::vector<std::string>& specials) {
  std::size_t i = 0;
  return train(
      [&](std::string& line) {
        if (i >= corpus.size()) return false;
        line = corpus[i++];
        return true;
      },
      target_size, specials);
}

}  // namespace argenkit::tok

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace argenkit::tok {

using TokenId = std::uint32_t;

inline constexpr int kModelFormatVersion = 1;
inline constexpr std::size_t kDefaultVocabSize = 8000;
// Vocabulary size used for the full-scale multilingual models.
inline constexpr std::size_t kFullScaleVocabSize = 110000;
inline constexpr std::size_t kDefaultSentinels = 100;

std::string sentinel(std::size_t index);  // "<extra_id_N>"
// Index of a sentinel literal, or -1 if `token` is not one.
long sentinel_index(std::string_view token);

// <pad>, <unk>, <URL>, <USER>, then <extra_id_0> ... <extra_id_{n-1}>.
std::vector<std::string> default_specials(std::size_t sentinels = kDefaultSentinels);

struct EncodedSeq {
  std::vector<TokenId> ids;
  // Byte span [first, second) of each token in the source text.
  std::vector<std::pair<std::size_t, std::size_t>> offsets;
};

// Byte-level BPE model. Ids are dense: specials first, then the 256 byte
// pieces, then one piece per merge that produced a new string.
//
// Text is pre-split into segments: a single ASCII space glued to the
// following non-whitespace run (the word-initial marker), any other
// whitespace codepoint on its own, and leading non-whitespace runs. Merges
// never cross segment boundaries. Special literals are cut out before
// segmentation and always encode as one id.
class SubwordModel {
 public:
  struct Merge {
    TokenId left;
    TokenId right;
    TokenId output;
  };

  // Builds a byte-level model (no merges).
  explicit SubwordModel(std::vector<std::string> specials = default_specials());

  std::size_t size() const { return pieces_.size(); }
  std::size_t special_count() const { return specials_count_; }
  const std::vector<std::string>& pieces() const { return pieces_; }
  const std::vector<Merge>& merges() const { return merges_; }
  std::vector<std::string> specials() const;

  bool is_special(TokenId id) const { return id < specials_count_; }
  TokenId byte_id(unsigned char b) const { return static_cast<TokenId>(specials_count_ + b); }
  // Id of a special literal or a non-special piece with these exact bytes.
  TokenId id_of_special(std::string_view literal) const;
  TokenId id_of_piece(std::string_view bytes) const;
  const std::string& piece(TokenId id) const;

  EncodedSeq encode(std::string_view text) const;
  std::string decode(const std::vector<TokenId>& ids) const;  // throws DataError on unknown id

  // Copy keeping only the first `count` merges (pieces are retained).
  SubwordModel with_merge_prefix(std::size_t count) const;

  std::string to_json() const;
  static SubwordModel from_json(std::string_view json);
  void save(const std::string& path) const;
  static SubwordModel load(const std::string& path);

  bool operator==(const SubwordModel& other) const {
    return pieces_ == other.pieces_ && specials_count_ == other.specials_count_ &&
           merge_pairs() == other.merge_pairs();
  }

 private:
  friend SubwordModel train(const std::function<bool(std::string&)>&, std::size_t,
                            const std::vector<std::string>&);

  std::vector<std::pair<TokenId, TokenId>> merge_pairs() const;
  TokenId add_piece(std::string bytes);
  void add_merge(TokenId left, TokenId right);
  void encode_segment(std::string_view segment, std::size_t base, EncodedSeq& out) const;

  static std::uint64_t pair_key(TokenId l, TokenId r) {
    return (static_cast<std::uint64_t>(l) << 32) | r;
  }

  std::vector<std::string> pieces_;
  std::size_t specials_count_ = 0;
  std::unordered_map<std::string, TokenId> special_ids_;
  std::unordered_map<std::string, TokenId> piece_ids_;  // non-special pieces
  std::vector<Merge> merges_;
  // pair -> (rank, output)
  std::unordered_map<std::uint64_t, std::pair<std::uint32_t, TokenId>> merge_rank_;
};

// Splits `text` into special literals and whitespace-delimited segments.
// Each entry is (byte offset, length, is_special).
struct Segment {
  std::size_t offset;
  std::size_t length;
  bool special;
};
std::vector<Segment> segment_text(std::string_view text, const std::vector<std::string>& specials);

// Trains merges on a corpus pulled line by line from `next_line` (returns
// false at end). At each step the most frequent adjacent pair is merged;
// ties go to the lexicographically smallest (left bytes, right bytes).
// Stops when the vocabulary reaches `target_size` or no pair occurs twice.
// Throws InvalidArgument if target_size < specials + 256, DataError on an
// empty corpus.
SubwordModel train(const std::function<bool(std::string&)>& next_line, std::size_t target_size,
                   const std::vector<std::string>& specials = default_specials());

SubwordModel train(const std::vector<std::string>& corpus, std::size_t target_size,
                   const std::vector<std::string>& specials = default_specials());

}  // namespace argenkit::tok

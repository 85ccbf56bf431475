#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "argenkit/error.hpp"
#include "argenkit/tokenizer.hpp"
#include "fuzz.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace argenkit;
using namespace argenkit::tok;

namespace {

const std::size_t kFloor = default_specials().size() + 256;

std::string merged_piece(const SubwordModel& m, std::size_t k) { return m.piece(m.merges()[k].output); }

}  // namespace

TEST(Sentinels, Literals) {
  EXPECT_EQ(sentinel(0), "<extra_id_0>");
  EXPECT_EQ(sentinel_index("<extra_id_42>"), 42);
  EXPECT_EQ(sentinel_index("<extra_id_042>"), -1);
  EXPECT_EQ(sentinel_index("<extra_id_>"), -1);
  EXPECT_EQ(sentinel_index("hello"), -1);
  EXPECT_EQ(default_specials().size(), 104u);
}

TEST(Train, TinyCorpusFirstMergeIsAB) {
  const std::vector<std::string> corpus{"abab", "abab", "abab"};
  const auto m = train(corpus, kFloor + 1);
  ASSERT_EQ(m.merges().size(), 1u);
  EXPECT_EQ(m.piece(m.merges()[0].left), "a");
  EXPECT_EQ(m.piece(m.merges()[0].right), "b");
  EXPECT_EQ(m.size(), kFloor + 1);
}

TEST(Train, FirstMergeMatchesPairCountOracle) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> corpus;
    const std::size_t lines = rng.uniform_int(1, 6);
    for (std::size_t i = 0; i < lines; ++i) {
      std::string line;
      const std::size_t words = rng.uniform_int(1, 4);
      for (std::size_t w = 0; w < words; ++w) {
        if (w) line += ' ';
        const std::size_t len = rng.uniform_int(1, 6);
        for (std::size_t c = 0; c < len; ++c) line += static_cast<char>('a' + rng.uniform_int(0, 2));
      }
      corpus.push_back(line);
    }
    const auto expected = oracle::most_frequent_pair(corpus);
    const auto m = train(corpus, kFloor + 1);
    if (!expected) {
      EXPECT_TRUE(m.merges().empty());
      continue;
    }
    ASSERT_EQ(m.merges().size(), 1u);
    EXPECT_EQ(m.piece(m.merges()[0].left), expected->first);
    EXPECT_EQ(m.piece(m.merges()[0].right), expected->second);
  }
}

TEST(Train, FloorGivesByteLevelModel) {
  const auto m = train(std::vector<std::string>{"abab"}, kFloor);
  EXPECT_TRUE(m.merges().empty());
  EXPECT_EQ(m.size(), kFloor);
}

TEST(Train, Errors) {
  EXPECT_THROW(train(std::vector<std::string>{"a"}, kFloor - 1), InvalidArgument);
  try {
    train(std::vector<std::string>{}, kFloor + 10);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_STREQ(e.what(), "empty training corpus");
  }
}

TEST(Train, StopsWhenNoPairRepeats) {
  const auto m = train(std::vector<std::string>{"abc"}, kFloor + 50);
  EXPECT_TRUE(m.merges().empty());
}

TEST(Train, ByteReproducible) {
  Rng rng(2);
  std::vector<std::string> corpus;
  for (int i = 0; i < 200; ++i) corpus.push_back(fuzz::arabic_text(rng, 40));
  const auto a = train(corpus, kFloor + 120);
  const auto b = train(corpus, kFloor + 120);
  EXPECT_EQ(a.to_json(), b.to_json());
}

TEST(Train, MergesNeverCrossWhitespace) {
  const auto m = train(std::vector<std::string>{"ab ab ab ab", "ab ab"}, kFloor + 20);
  for (const auto& p : m.pieces()) {
    if (p.size() < 2 || p.front() == '<') continue;
    EXPECT_EQ(p.find(' ', 1), std::string::npos) << p;
  }
}

TEST(Encode, ByteLevelHi) {
  const SubwordModel m;
  const auto e = m.encode("hi");
  EXPECT_EQ(e.ids, (std::vector<TokenId>{m.byte_id('h'), m.byte_id('i')}));
}

TEST(Encode, AppliesMerges) {
  const auto m = train(std::vector<std::string>{"abab", "abab", "abab"}, kFloor + 1);
  const auto e = m.encode("abab");
  const TokenId ab = m.id_of_piece("ab");
  EXPECT_EQ(e.ids, (std::vector<TokenId>{ab, ab}));
  EXPECT_EQ(e.offsets, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 2}, {2, 4}}));
}

TEST(Encode, SpecialsAreSingleIds) {
  const SubwordModel m;
  EXPECT_EQ(m.encode("<URL>").ids, (std::vector<TokenId>{m.id_of_special("<URL>")}));
  const auto e = m.encode("x<extra_id_0>y");
  ASSERT_EQ(e.ids.size(), 3u);
  EXPECT_EQ(e.ids[1], m.id_of_special("<extra_id_0>"));
  EXPECT_EQ(m.decode({m.id_of_special("<extra_id_0>")}), "<extra_id_0>");
}

TEST(Encode, HandAppliedMergeOracle) {
  Rng rng(8);
  std::vector<std::string> corpus;
  for (int i = 0; i < 100; ++i) corpus.push_back(fuzz::arabic_text(rng, 25));
  const auto m = train(corpus, kFloor + 60);
  for (int i = 0; i < 300; ++i) {
    const std::string s = fuzz::arabic_text(rng, 25);
    std::vector<std::string> pieces;
    for (TokenId id : m.encode(s).ids) pieces.push_back(m.piece(id));
    std::vector<std::pair<std::string, std::string>> merges;
    for (const auto& mg : m.merges()) merges.push_back({m.piece(mg.left), m.piece(mg.right)});
    ASSERT_EQ(pieces, oracle::bpe_encode(s, merges)) << s;
  }
}

TEST(Decode, RoundTripsFuzz) {
  Rng rng(4);
  std::vector<std::string> corpus;
  for (int i = 0; i < 100; ++i) corpus.push_back(fuzz::utf8_text(rng, 30));
  const auto m = train(corpus, kFloor + 100);
  for (int i = 0; i < 2000; ++i) {
    const std::string s = fuzz::utf8_text(rng, 40);
    ASSERT_EQ(m.decode(m.encode(s).ids), s);
  }
  // Arbitrary bytes survive too.
  std::string raw;
  for (int b = 0; b < 256; ++b) raw.push_back(static_cast<char>(b));
  EXPECT_EQ(m.decode(m.encode(raw).ids), raw);
}

TEST(Decode, UnknownIdThrows) {
  const SubwordModel m;
  EXPECT_THROW(m.decode({static_cast<TokenId>(m.size())}), DataError);
}

TEST(Encode, PrefixModelsNeverLengthenOutput) {
  Rng rng(6);
  std::vector<std::string> corpus;
  for (int i = 0; i < 200; ++i) corpus.push_back(fuzz::arabic_text(rng, 30));
  const auto m = train(corpus, kFloor + 80);
  for (int i = 0; i < 100; ++i) {
    const std::string s = fuzz::arabic_text(rng, 30);
    std::size_t prev = SIZE_MAX;
    for (std::size_t k = 0; k <= m.merges().size(); k += 10) {
      const std::size_t len = m.with_merge_prefix(k).encode(s).ids.size();
      ASSERT_LE(len, prev);
      prev = len;
    }
  }
}

TEST(Serialization, JsonRoundTrip) {
  const auto m = train(std::vector<std::string>{"كتب كتب كتب", "\xFF\xFE\xFF\xFE", "<0x41> <0x41>"}, kFloor + 10);
  const auto back = SubwordModel::from_json(m.to_json());
  EXPECT_TRUE(back == m);
  EXPECT_EQ(back.to_json(), m.to_json());

  const auto path = std::filesystem::temp_directory_path() / "argenkit_tok_test.json";
  m.save(path.string());
  EXPECT_TRUE(SubwordModel::load(path.string()) == m);
  std::filesystem::remove(path);
}

TEST(Serialization, RejectsWrongVersion) {
  auto doc = nlohmann::json::parse(SubwordModel().to_json());
  doc["version"] = 9;
  EXPECT_THROW(SubwordModel::from_json(doc.dump()), DataError);
  EXPECT_THROW(SubwordModel::from_json("{"), DataError);
}

TEST(Train, LaterMergesBuildOnEarlier) {
  const auto m = train(std::vector<std::string>{"aaaa aaaa aaaa aaaa"}, kFloor + 3);
  ASSERT_GE(m.merges().size(), 2u);
  EXPECT_EQ(merged_piece(m, 0), "aa");
}

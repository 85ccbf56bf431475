#include <gtest/gtest.h>

#include <set>

#include "argenkit/error.hpp"
#include "argenkit/paraphrase.hpp"

using namespace argenkit;
using namespace argenkit::para;

namespace {

class FixedScorer final : public SimilarityScorer {
 public:
  explicit FixedScorer(double v) : v_(v) {}
  double score(std::string_view, std::string_view) const override { return v_; }

 private:
  double v_;
};

class ThrowingScorer final : public SimilarityScorer {
 public:
  double score(std::string_view, std::string_view) const override { throw std::runtime_error("model offline"); }
};

// Foreign side maps to a fixed Arabic string.
class MapTranslator final : public Translator {
 public:
  std::string translate(std::string_view phrase, std::string_view) const override {
    if (phrase == "fail") throw TranslationError("no route");
    return "a b d";
  }
};

}  // namespace

TEST(UnigramOverlap, Examples) {
  EXPECT_DOUBLE_EQ(unigram_overlap("x y z", "x y z"), 1.0);
  EXPECT_DOUBLE_EQ(unigram_overlap("x y", "p q"), 0.0);
  EXPECT_DOUBLE_EQ(unigram_overlap("a b c", "a b d"), 0.5);
  EXPECT_DOUBLE_EQ(unigram_overlap("", ""), 1.0);
  EXPECT_DOUBLE_EQ(unigram_overlap("a a b", "a"), 0.5);
  EXPECT_DOUBLE_EQ(unigram_overlap("a b c", "a", OverlapDenominator::kLonger), 1.0 / 3.0);
}

TEST(Gate, BoundariesInclusive) {
  const MiningConfig cfg;
  EXPECT_EQ(gate(0.70, 0.35, cfg), Verdict::kAccepted);
  EXPECT_EQ(gate(0.99, 0.70, cfg), Verdict::kAccepted);
  EXPECT_EQ(gate(0.6999, 0.5, cfg), Verdict::kSimTooLow);
  EXPECT_EQ(gate(0.9901, 0.5, cfg), Verdict::kSimIdentical);
  EXPECT_EQ(gate(1.0, 0.5, cfg), Verdict::kSimIdentical);
  EXPECT_EQ(gate(0.85, 0.3499, cfg), Verdict::kOverlapLow);
  EXPECT_EQ(gate(0.85, 0.7001, cfg), Verdict::kOverlapHigh);
  EXPECT_EQ(gate(0.5, 0.9, cfg), Verdict::kSimTooLow);
}

TEST(Mine, Examples) {
  const MapTranslator mt;
  const std::vector<ParallelPair> pairs{{"x", "a b c"}};
  EXPECT_EQ(mine(pairs, mt, FixedScorer(1.0))[0].verdict, Verdict::kSimIdentical);
  const auto ok = mine(pairs, mt, FixedScorer(0.85))[0];
  EXPECT_EQ(ok.verdict, Verdict::kAccepted);
  EXPECT_DOUBLE_EQ(ok.overlap, 0.5);
  EXPECT_EQ(ok.side_a, "a b c");
  EXPECT_EQ(ok.side_b, "a b d");
  // Four shared tokens out of five: 0.8 overlap.
  const std::vector<ParallelPair> close{{"x", "a b d e f"}};
  class Close final : public Translator {
   public:
    std::string translate(std::string_view, std::string_view) const override { return "a b d e"; }
  } close_mt;
  EXPECT_EQ(mine(close, close_mt, FixedScorer(0.85))[0].verdict, Verdict::kOverlapHigh);
}

TEST(Mine, PortFailuresBecomeVerdicts) {
  const MapTranslator mt;
  const auto failed = mine({{"fail", "a"}}, mt, FixedScorer(0.8));
  EXPECT_EQ(failed[0].verdict, Verdict::kTranslationFailed);
  EXPECT_FALSE(failed[0].error.empty());
  EXPECT_EQ(mine({{"x", "a"}}, mt, ThrowingScorer())[0].verdict, Verdict::kScoringFailed);
}

TEST(Mine, ParallelMatchesSerial) {
  const MapTranslator mt;
  const TokenCosineScorer cos;
  std::vector<ParallelPair> pairs;
  for (int i = 0; i < 200; ++i) pairs.push_back({"x", i % 3 ? "a b c" : "a b d e"});
  const auto serial = mine(pairs, mt, cos, {}, 1);
  const auto parallel = mine(pairs, mt, cos, {}, 4);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].verdict, parallel[i].verdict);
    EXPECT_EQ(serial[i].similarity, parallel[i].similarity);
  }
}

TEST(TokenCosine, Properties) {
  const TokenCosineScorer s;
  EXPECT_DOUBLE_EQ(s.score("a b", "a b"), 1.0);
  EXPECT_DOUBLE_EQ(s.score("a", "b"), 0.0);
  EXPECT_DOUBLE_EQ(s.score("a b", "b c"), s.score("b c", "a b"));
  EXPECT_NEAR(s.score("a b", "a c"), 0.5, 1e-12);
}

TEST(Split, SizesAndDeterminism) {
  std::vector<int> records(10);
  for (int i = 0; i < 10; ++i) records[i] = i;
  const auto a = split_dataset(records, {0.8, 0.1, 0.1}, 1);
  EXPECT_EQ(a.train.size(), 8u);
  EXPECT_EQ(a.dev.size(), 1u);
  EXPECT_EQ(a.test.size(), 1u);
  const auto b = split_dataset(records, {0.8, 0.1, 0.1}, 1);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);

  std::set<int> all(a.train.begin(), a.train.end());
  all.insert(a.dev.begin(), a.dev.end());
  all.insert(a.test.begin(), a.test.end());
  EXPECT_EQ(all.size(), 10u);
}

TEST(Split, LargestRemainder) {
  EXPECT_EQ(split_sizes(7, {0.8, 0.1, 0.1}), (std::array<std::size_t, 3>{5, 1, 1}));
  EXPECT_EQ(split_sizes(0, {0.8, 0.1, 0.1}), (std::array<std::size_t, 3>{0, 0, 0}));
  EXPECT_EQ(split_sizes(122, {116.0 / 122, 6.0 / 122, 0.0}), (std::array<std::size_t, 3>{116, 6, 0}));
  for (std::size_t n = 0; n < 200; ++n) {
    const auto s = split_sizes(n, {0.7, 0.2, 0.1});
    EXPECT_EQ(s[0] + s[1] + s[2], n);
  }
  EXPECT_THROW(split_sizes(10, {0.5, 0.5, 0.5}), InvalidArgument);
  EXPECT_TRUE(split_dataset(std::vector<int>{}, {0.8, 0.1, 0.1}, 0).train.empty());
}

TEST(MiningConfig, RejectsInvertedBounds) {
  MiningConfig cfg;
  cfg.sim_min = 0.9;
  cfg.sim_max = 0.8;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

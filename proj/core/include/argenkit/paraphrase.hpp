#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "argenkit/normalize.hpp"
#include "argenkit/rng.hpp"
#include "argenkit/translator.hpp"

namespace argenkit::para {

enum class OverlapDenominator { kUnion, kLonger };

// |A ∩ B| over |A ∪ B| (or max(|A|, |B|)) for the sets of whitespace tokens.
// Two empty inputs overlap fully.
double unigram_overlap(std::string_view a, std::string_view b,
                       OverlapDenominator denominator = OverlapDenominator::kUnion);

// Semantic-similarity port: score in [0, 1], symmetric, score(a, a) == 1.
class SimilarityScorer {
 public:
  virtual ~SimilarityScorer() = default;
  virtual double score(std::string_view a, std::string_view b) const = 0;
  virtual bool thread_safe() const { return true; }
};

// Cosine similarity of whitespace-token count vectors.
class TokenCosineScorer final : public SimilarityScorer {
 public:
  double score(std::string_view a, std::string_view b) const override;
};

struct MiningConfig {
  double sim_min = 0.70;
  double sim_max = 0.99;
  double ov_min = 0.35;
  double ov_max = 0.70;
  OverlapDenominator denominator = OverlapDenominator::kUnion;
  // Overlap is computed on normalized text when set.
  bool normalize_for_overlap = true;
  text::NormalizationConfig normalization{};
  std::string source_lang = "en";
  std::string target_lang = "ar";

  void validate() const;
};

enum class Verdict { kAccepted, kSimTooLow, kSimIdentical, kOverlapLow, kOverlapHigh, kTranslationFailed, kScoringFailed };

std::string_view verdict_name(Verdict v);

// Similarity gate first, then the overlap gate. All bounds inclusive.
Verdict gate(double similarity, double overlap, const MiningConfig& config);

struct ParallelPair {
  std::string foreign;
  std::string arabic;
};

struct CandidatePair {
  std::string foreign;
  std::string side_a;  // reference Arabic
  std::string side_b;  // machine translation of `foreign`
  double similarity = 0.0;
  double overlap = 0.0;
  Verdict verdict = Verdict::kAccepted;
  std::string error;  // set for kTranslationFailed / kScoringFailed

  bool accepted() const { return verdict == Verdict::kAccepted; }
};

// Translates each foreign side into Arabic, scores it against the reference,
// and applies both gates. Output has one entry per input, in input order;
// per-pair port failures become failed verdicts. `jobs` > 1 fans out when
// both ports are thread-safe.
std::vector<CandidatePair> mine(const std::vector<ParallelPair>& pairs, const Translator& translator,
                                const SimilarityScorer& scorer, const MiningConfig& config = {}, unsigned jobs = 1);

CandidatePair mine_one(const ParallelPair& pair, const Translator& translator, const SimilarityScorer& scorer,
                       const MiningConfig& config);

// Partition sizes for n records: floor(r_i * n), with leftover records going
// to the largest fractional remainders (earlier split on ties).
std::array<std::size_t, 3> split_sizes(std::size_t n, const std::array<double, 3>& ratios);

template <typename T>
struct Splits {
  std::vector<T> train;
  std::vector<T> dev;
  std::vector<T> test;
};

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

// Seeded shuffle, then consecutive slices of split_sizes(). Ratios must sum
// to 1 within 1e-9.
template <typename T>
Splits<T> split_dataset(const std::vector<T>& records, const std::array<double, 3>& ratios, std::uint64_t seed) {
  const auto sizes = split_sizes(records.size(), ratios);
  const auto order = shuffled_indices(records.size(), seed);
  Splits<T> out;
  std::size_t k = 0;
  for (std::size_t i = 0; i < sizes[0]; ++i) out.train.push_back(records[order[k++]]);
  for (std::size_t i = 0; i < sizes[1]; ++i) out.dev.push_back(records[order[k++]]);
  for (std::size_t i = 0; i < sizes[2]; ++i) out.test.push_back(records[order[k++]]);
  return out;
}

}  // namespace argenkit::para

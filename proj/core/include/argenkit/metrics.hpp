#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace argenkit::metrics {

using Tokens = std::vector<std::string>;

// ---------------------------------------------------------------------------
// BLEU

inline constexpr int kBleuOrder = 4;

// Sufficient statistics for corpus BLEU; sums over sentences, so partial
// counts from separate workers can be added together.
struct BleuStats {
  std::array<std::size_t, kBleuOrder> matches{};  // clipped
  std::array<std::size_t, kBleuOrder> totals{};
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;

  BleuStats& operator+=(const BleuStats& other);
};

enum class BleuSmoothing {
  kNone,
  kAddOne,  // +1 to matches and totals for n >= 2
};

struct BleuScore {
  double score = 0.0;  // 0..100
  std::array<double, kBleuOrder> precisions{};
  double brevity_penalty = 0.0;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
};

BleuStats bleu_stats(std::span<const std::string> hypothesis, std::span<const std::string> reference);
BleuScore bleu_from_stats(const BleuStats& stats, BleuSmoothing smoothing = BleuSmoothing::kNone);

// Corpus BLEU over whitespace-token lists, one reference per hypothesis.
// Throws InvalidArgument when the list sizes differ or are empty.
BleuScore bleu(const std::vector<Tokens>& hypotheses, const std::vector<Tokens>& references,
               BleuSmoothing smoothing = BleuSmoothing::kNone);

// ---------------------------------------------------------------------------
// ROUGE

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

RougeScore make_rouge(std::size_t overlap, std::size_t hyp_count, std::size_t ref_count);

// N-gram multiset overlap; recall against the reference. n < 1 throws.
RougeScore rouge_n(std::span<const std::string> hypothesis, std::span<const std::string> reference, int n);
RougeScore rouge_l(std::span<const std::string> hypothesis, std::span<const std::string> reference);

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

// ---------------------------------------------------------------------------
// QA and classification

// Lowercases Latin letters, removes Arabic diacritics and punctuation, and
// collapses whitespace.
std::string normalize_answer(std::string_view answer);

bool exact_match(std::string_view prediction, std::string_view gold);
// Harmonic mean of token precision and recall over the normalized answers.
double qa_token_f1(std::string_view prediction, std::string_view gold);

using LabelPair = std::pair<std::string, std::string>;  // (prediction, gold)

double accuracy(const std::vector<LabelPair>& pairs);
// Mean per-class F1 over `labels` (every label seen in `pairs` when empty).
// A class that never appears in predictions or gold scores 0.
double macro_f1(const std::vector<LabelPair>& pairs, const std::vector<std::string>& labels = {});

// ---------------------------------------------------------------------------
// Composite benchmark score

struct ClusterRow {
  std::string cluster;
  double metric_a;  // Acc or EM
  double metric_b;  // F1
};

struct ClusterScoreTable {
  std::vector<ClusterRow> rows;

  // Scores within [0, 100], one row per cluster, at least one row.
  void validate() const;
};

struct ArlueScore {
  double avg_a;
  double avg_b;
  double score;
};

// Mean of each column, then the mean of the two column means.
ArlueScore arlue_score(const ClusterScoreTable& table);

double round2(double value);

}  // namespace argenkit::metrics

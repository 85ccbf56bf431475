#include "argenkit/metrics.hpp"

#include <unicode/uchar.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "argenkit/error.hpp"
#include "argenkit/normalize.hpp"
#include "argenkit/utf8.hpp"

namespace argenkit::metrics {

namespace {

// Length-prefixed join, so distinct token tuples never share a key.
using NgramCounts = std::unordered_map<std::string, std::size_t>;

NgramCounts ngram_counts(std::span<const std::string> tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key;
    for (std::size_t j = i; j < i + n; ++j) {
      key += std::to_string(tokens[j].size());
      key += ':';
      key += tokens[j];
    }
    ++counts[key];
  }
  return counts;
}

std::size_t clipped_overlap(const NgramCounts& hyp, const NgramCounts& ref) {
  std::size_t total = 0;
  for (const auto& [gram, count] : hyp) {
    if (auto it = ref.find(gram); it != ref.end()) total += std::min(count, it->second);
  }
  return total;
}

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

}  // namespace

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  for (int n = 0; n < kBleuOrder; ++n) {
    matches[n] += other.matches[n];
    totals[n] += other.totals[n];
  }
  hyp_len += other.hyp_len;
  ref_len += other.ref_len;
  return *this;
}

BleuStats bleu_stats(std::span<const std::string> hypothesis, std::span<const std::string> reference) {
  BleuStats s;
  s.hyp_len = hypothesis.size();
  s.ref_len = reference.size();
  for (int n = 1; n <= kBleuOrder; ++n) {
    const auto h = ngram_counts(hypothesis, static_cast<std::size_t>(n));
    const auto r = ngram_counts(reference, static_cast<std::size_t>(n));
    s.matches[n - 1] = clipped_overlap(h, r);
    s.totals[n - 1] = hypothesis.size() >= static_cast<std::size_t>(n) ? hypothesis.size() - n + 1 : 0;
  }
  return s;
}

BleuScore bleu_from_stats(const BleuStats& stats, BleuSmoothing smoothing) {
  BleuScore out;
  out.hyp_len = stats.hyp_len;
  out.ref_len = stats.ref_len;
  if (stats.hyp_len == 0) return out;

  out.brevity_penalty =
      stats.hyp_len < stats.ref_len
          ? std::exp(1.0 - static_cast<double>(stats.ref_len) / static_cast<double>(stats.hyp_len))
          : 1.0;

  double log_sum = 0.0;
  bool zero = false;
  for (int n = 0; n < kBleuOrder; ++n) {
    double m = static_cast<double>(stats.matches[n]);
    double t = static_cast<double>(stats.totals[n]);
    if (smoothing == BleuSmoothing::kAddOne && n >= 1) {
      m += 1.0;
      t += 1.0;
    }
    out.precisions[n] = t > 0.0 ? m / t : 0.0;
    if (out.precisions[n] == 0.0) {
      zero = true;
    } else {
      log_sum += std::log(out.precisions[n]);
    }
  }
  out.score = zero ? 0.0 : 100.0 * out.brevity_penalty * std::exp(log_sum / kBleuOrder);
  return out;
}

BleuScore bleu(const std::vector<Tokens>& hypotheses, const std::vector<Tokens>& references,
               BleuSmoothing smoothing) {
  if (hypotheses.size() != references.size())
    throw InvalidArgument("BLEU needs one reference per hypothesis (" + std::to_string(hypotheses.size()) + " vs " +
                          std::to_string(references.size()) + ")");
  if (hypotheses.empty()) throw InvalidArgument("BLEU needs at least one hypothesis");
  BleuStats total;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) total += bleu_stats(hypotheses[i], references[i]);
  return bleu_from_stats(total, smoothing);
}

RougeScore make_rouge(std::size_t overlap, std::size_t hyp_count, std::size_t ref_count) {
  RougeScore s;
  s.precision = hyp_count ? static_cast<double>(overlap) / static_cast<double>(hyp_count) : 0.0;
  s.recall = ref_count ? static_cast<double>(overlap) / static_cast<double>(ref_count) : 0.0;
  s.f1 = harmonic(s.precision, s.recall);
  return s;
}

RougeScore rouge_n(std::span<const std::string> hypothesis, std::span<const std::string> reference, int n) {
  if (n < 1) throw InvalidArgument("ROUGE-N needs n >= 1, got " + std::to_string(n));
  const auto nn = static_cast<std::size_t>(n);
  const auto h = ngram_counts(hypothesis, nn);
  const auto r = ngram_counts(reference, nn);
  const std::size_t hyp_count = hypothesis.size() >= nn ? hypothesis.size() - nn + 1 : 0;
  const std::size_t ref_count = reference.size() >= nn ? reference.size() - nn + 1 : 0;
  return make_rouge(clipped_overlap(h, r), hyp_count, ref_count);
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeScore rouge_l(std::span<const std::string> hypothesis, std::span<const std::string> reference) {
  return make_rouge(lcs_length(hypothesis, reference), hypothesis.size(), reference.size());
}

std::string normalize_answer(std::string_view answer) {
  std::string cleaned;
  cleaned.reserve(answer.size());
  for (std::size_t pos = 0; pos < answer.size();) {
    const auto cp = utf8::decode_at(answer, pos);
    pos += cp.length;
    const auto c = static_cast<UChar32>(cp.value);
    if (text::is_arabic_diacritic(cp.value) || u_ispunct(c)) continue;
    utf8::append(cleaned, static_cast<char32_t>(u_tolower(c)));
  }
  return utf8::join(utf8::split_whitespace(cleaned));
}

bool exact_match(std::string_view prediction, std::string_view gold) {
  return normalize_answer(prediction) == normalize_answer(gold);
}

double qa_token_f1(std::string_view prediction, std::string_view gold) {
  const auto p = utf8::split_whitespace(normalize_answer(prediction));
  const auto g = utf8::split_whitespace(normalize_answer(gold));
  if (p.empty() || g.empty()) return p.empty() && g.empty() ? 1.0 : 0.0;
  std::map<std::string, std::size_t> gold_counts;
  for (const auto& t : g) ++gold_counts[t];
  std::size_t common = 0;
  for (const auto& t : p) {
    auto it = gold_counts.find(t);
    if (it != gold_counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  return harmonic(static_cast<double>(common) / static_cast<double>(p.size()),
                  static_cast<double>(common) / static_cast<double>(g.size()));
}

double accuracy(const std::vector<LabelPair>& pairs) {
  if (pairs.empty()) throw InvalidArgument("accuracy of an empty prediction set");
  std::size_t correct = 0;
  for (const auto& [pred, gold] : pairs) correct += pred == gold;
  return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

double macro_f1(const std::vector<LabelPair>& pairs, const std::vector<std::string>& labels) {
  std::vector<std::string> classes = labels;
  if (classes.empty()) {
    std::set<std::string> seen;
    for (const auto& [pred, gold] : pairs) {
      seen.insert(pred);
      seen.insert(gold);
    }
    classes.assign(seen.begin(), seen.end());
  }
  if (classes.empty()) throw InvalidArgument("macro-F1 needs at least one class");

  double sum = 0.0;
  for (const auto& c : classes) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (const auto& [pred, gold] : pairs) {
      if (pred == c && gold == c) ++tp;
      else if (pred == c) ++fp;
      else if (gold == c) ++fn;
    }
    const double p = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    const double r = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    sum += harmonic(p, r);
  }
  return sum / static_cast<double>(classes.size());
}

void ClusterScoreTable::validate() const {
  if (rows.empty()) throw InvalidArgument("ARLUE table has no cluster rows");
  std::set<std::string> seen;
  for (const auto& row : rows) {
    if (!seen.insert(row.cluster).second) throw InvalidArgument("duplicate cluster '" + row.cluster + "'");
    for (double v : {row.metric_a, row.metric_b})
      if (!(v >= 0.0 && v <= 100.0))
        throw InvalidArgument("cluster '" + row.cluster + "' has a score outside [0, 100]");
  }
}

ArlueScore arlue_score(const ClusterScoreTable& table) {
  table.validate();
  double sum_a = 0.0, sum_b = 0.0;
  for (const auto& row : table.rows) {
    sum_a += row.metric_a;
    sum_b += row.metric_b;
  }
  const auto n = static_cast<double>(table.rows.size());
  ArlueScore s{sum_a / n, sum_b / n, 0.0};
  s.score = (s.avg_a + s.avg_b) / 2.0;
  return s;
}

double round2(double value) { return std::round(value * 100.0) / 100.0; }

}  // namespace argenkit::metrics

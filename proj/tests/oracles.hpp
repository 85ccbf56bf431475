#pragma once

// Deliberately naive reference implementations used to check the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Tokens = std::vector<std::string>;

// ---------------------------------------------------------------------------
// Tokenizer

// Segments text whose only whitespace is ASCII space: a space followed by a
// non-space run forms one segment, other spaces stand alone.
inline std::vector<std::string> segments(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i;
    if (s[i] == ' ') {
      if (i + 1 < s.size() && s[i + 1] != ' ') {
        j = i + 1;
        while (j < s.size() && s[j] != ' ') ++j;
      } else {
        j = i + 1;
      }
    } else {
      while (j < s.size() && s[j] != ' ') ++j;
    }
    out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// Most frequent adjacent byte pair across all segments (ties: smallest
// (left, right)); nullopt when no pair occurs at least twice.
inline std::optional<std::pair<std::string, std::string>> most_frequent_pair(const std::vector<std::string>& corpus) {
  std::map<std::pair<std::string, std::string>, long> counts;
  for (const auto& line : corpus)
    for (const auto& seg : segments(line))
      for (std::size_t i = 0; i + 1 < seg.size(); ++i) ++counts[{seg.substr(i, 1), seg.substr(i + 1, 1)}];
  std::optional<std::pair<std::string, std::string>> best;
  long best_count = 1;
  for (const auto& [pair, n] : counts) {
    if (n > best_count) {
      best = pair;
      best_count = n;
    }
  }
  return best;
}

// Repeatedly merges every occurrence of the lowest-ranked adjacent pair.
inline std::vector<std::string> bpe_encode(const std::string& text,
                                           const std::vector<std::pair<std::string, std::string>>& merges) {
  std::vector<std::string> out;
  for (const auto& seg : segments(text)) {
    std::vector<std::string> parts;
    for (char c : seg) parts.emplace_back(1, c);
    for (;;) {
      std::size_t best = merges.size();
      for (std::size_t i = 0; i + 1 < parts.size(); ++i)
        for (std::size_t r = 0; r < best; ++r)
          if (merges[r].first == parts[i] && merges[r].second == parts[i + 1]) best = r;
      if (best == merges.size()) break;
      std::vector<std::string> next;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i + 1 < parts.size() && parts[i] == merges[best].first && parts[i + 1] == merges[best].second) {
          next.push_back(parts[i] + parts[i + 1]);
          ++i;
        } else {
          next.push_back(parts[i]);
        }
      }
      parts = std::move(next);
    }
    out.insert(out.end(), parts.begin(), parts.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Metrics

inline std::map<Tokens, long> ngram_counts(const Tokens& t, std::size_t n) {
  std::map<Tokens, long> counts;
  for (std::size_t i = 0; i + n <= t.size(); ++i) ++counts[Tokens(t.begin() + i, t.begin() + i + n)];
  return counts;
}

struct Bleu {
  double score = 0.0;
  double precisions[4] = {0, 0, 0, 0};
  double bp = 0.0;
};

// Corpus BLEU-4, uniform weights, single reference, no smoothing, 0..100.
inline Bleu bleu(const std::vector<Tokens>& hyps, const std::vector<Tokens>& refs) {
  long match[4] = {0, 0, 0, 0};
  long total[4] = {0, 0, 0, 0};
  long c = 0, r = 0;
  for (std::size_t k = 0; k < hyps.size(); ++k) {
    c += static_cast<long>(hyps[k].size());
    r += static_cast<long>(refs[k].size());
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto h = ngram_counts(hyps[k], n);
      const auto g = ngram_counts(refs[k], n);
      for (const auto& [gram, count] : h) {
        total[n - 1] += count;
        const auto it = g.find(gram);
        if (it != g.end()) match[n - 1] += std::min(count, it->second);
      }
    }
  }
  Bleu out;
  double log_sum = 0.0;
  bool zero = c == 0;
  for (int n = 0; n < 4; ++n) {
    out.precisions[n] = total[n] ? static_cast<double>(match[n]) / static_cast<double>(total[n]) : 0.0;
    if (match[n] == 0) zero = true;
    else log_sum += std::log(out.precisions[n]);
  }
  out.bp = c == 0 ? 0.0 : (c >= r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c)));
  out.score = zero ? 0.0 : 100.0 * out.bp * std::exp(log_sum / 4.0);
  return out;
}

// ROUGE-N by explicit multiset intersection.
struct Prf {
  double p, r, f;
};

inline Prf prf(long overlap, long hyp, long ref) {
  const double p = hyp ? static_cast<double>(overlap) / static_cast<double>(hyp) : 0.0;
  const double r = ref ? static_cast<double>(overlap) / static_cast<double>(ref) : 0.0;
  return {p, r, p + r > 0 ? 2 * p * r / (p + r) : 0.0};
}

inline Prf rouge_n(const Tokens& hyp, const Tokens& ref, std::size_t n) {
  std::multiset<Tokens> h, g;
  for (std::size_t i = 0; i + n <= hyp.size(); ++i) h.insert(Tokens(hyp.begin() + i, hyp.begin() + i + n));
  for (std::size_t i = 0; i + n <= ref.size(); ++i) g.insert(Tokens(ref.begin() + i, ref.begin() + i + n));
  std::vector<Tokens> both;
  std::set_intersection(h.begin(), h.end(), g.begin(), g.end(), std::back_inserter(both));
  return prf(static_cast<long>(both.size()), static_cast<long>(h.size()), static_cast<long>(g.size()));
}

inline bool is_subsequence(const Tokens& sub, const Tokens& of) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < of.size() && j < sub.size(); ++i)
    if (of[i] == sub[j]) ++j;
  return j == sub.size();
}

// Longest common subsequence by enumerating every subsequence of `a`.
inline std::size_t lcs_exhaustive(const Tokens& a, const Tokens& b) {
  std::size_t best = 0;
  const std::uint32_t masks = 1u << a.size();
  for (std::uint32_t m = 0; m < masks; ++m) {
    Tokens sub;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (m & (1u << i)) sub.push_back(a[i]);
    if (sub.size() > best && is_subsequence(sub, b)) best = sub.size();
  }
  return best;
}

}  // namespace oracle

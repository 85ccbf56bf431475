#include "argenkit/paraphrase.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <thread>

#include "argenkit/error.hpp"
#include "argenkit/utf8.hpp"

namespace argenkit::para {

double unigram_overlap(std::string_view a, std::string_view b, OverlapDenominator denominator) {
  const auto ta = utf8::split_whitespace_views(a);
  const auto tb = utf8::split_whitespace_views(b);
  const std::set<std::string_view> sa(ta.begin(), ta.end());
  const std::set<std::string_view> sb(tb.begin(), tb.end());
  if (sa.empty() && sb.empty()) return 1.0;

  std::size_t common = 0;
  for (const auto& t : sa) common += sb.count(t);
  const std::size_t denom =
      denominator == OverlapDenominator::kUnion ? sa.size() + sb.size() - common : std::max(sa.size(), sb.size());
  return static_cast<double>(common) / static_cast<double>(denom);
}

double TokenCosineScorer::score(std::string_view a, std::string_view b) const {
  if (a == b) return 1.0;
  std::map<std::string_view, std::int64_t> ca, cb;
  for (auto t : utf8::split_whitespace_views(a)) ++ca[t];
  for (auto t : utf8::split_whitespace_views(b)) ++cb[t];
  if (ca.empty() && cb.empty()) return 1.0;
  if (ca.empty() || cb.empty()) return 0.0;
  std::int64_t dot = 0, na = 0, nb = 0;
  for (const auto& [t, c] : ca) {
    na += c * c;
    if (auto it = cb.find(t); it != cb.end()) dot += c * it->second;
  }
  for (const auto& [t, c] : cb) nb += c * c;
  const double s = static_cast<double>(dot) / std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
  return std::clamp(s, 0.0, 1.0);
}

void MiningConfig::validate() const {
  auto check = [](double lo, double hi, const char* what) {
    if (!(lo >= 0.0 && lo <= hi && hi <= 1.0))
      throw InvalidArgument(std::string(what) + " bounds must satisfy 0 <= min <= max <= 1");
  };
  check(sim_min, sim_max, "similarity");
  check(ov_min, ov_max, "overlap");
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kAccepted: return "accepted";
    case Verdict::kSimTooLow: return "sim_too_low";
    case Verdict::kSimIdentical: return "sim_identical";
    case Verdict::kOverlapLow: return "overlap_low";
    case Verdict::kOverlapHigh: return "overlap_high";
    case Verdict::kTranslationFailed: return "translation_failed";
    case Verdict::kScoringFailed: return "scoring_failed";
  }
  return "?";
}

Verdict gate(double similarity, double overlap, const MiningConfig& config) {
  if (similarity < config.sim_min) return Verdict::kSimTooLow;
  if (similarity > config.sim_max) return Verdict::kSimIdentical;
  if (overlap < config.ov_min) return Verdict::kOverlapLow;
  if (overlap > config.ov_max) return Verdict::kOverlapHigh;
  return Verdict::kAccepted;
}

CandidatePair mine_one(const ParallelPair& pair, const Translator& translator, const SimilarityScorer& scorer,
                       const MiningConfig& config) {
  CandidatePair c;
  c.foreign = pair.foreign;
  c.side_a = pair.arabic;
  try {
    c.side_b = translator.translate(pair.foreign, config.target_lang);
  } catch (const std::exception& e) {
    c.verdict = Verdict::kTranslationFailed;
    c.error = e.what();
    return c;
  }
  try {
    c.similarity = scorer.score(c.side_a, c.side_b);
  } catch (const std::exception& e) {
    c.verdict = Verdict::kScoringFailed;
    c.error = e.what();
    return c;
  }
  if (config.normalize_for_overlap) {
    c.overlap = unigram_overlap(text::normalize(c.side_a, config.normalization).text,
                                text::normalize(c.side_b, config.normalization).text, config.denominator);
  } else {
    c.overlap = unigram_overlap(c.side_a, c.side_b, config.denominator);
  }
  c.verdict = gate(c.similarity, c.overlap, config);
  return c;
}

std::vector<CandidatePair> mine(const std::vector<ParallelPair>& pairs, const Translator& translator,
                                const SimilarityScorer& scorer, const MiningConfig& config, unsigned jobs) {
  config.validate();
  std::vector<CandidatePair> out(pairs.size());
  if (jobs <= 1 || !translator.thread_safe() || !scorer.thread_safe() || pairs.size() < 2) {
    for (std::size_t i = 0; i < pairs.size(); ++i) out[i] = mine_one(pairs[i], translator, scorer, config);
    return out;
  }
  // Strided partition; each slot is written by exactly one worker.
  std::vector<std::thread> workers;
  const unsigned n = std::min<unsigned>(jobs, static_cast<unsigned>(pairs.size()));
  for (unsigned w = 0; w < n; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < pairs.size(); i += n) out[i] = mine_one(pairs[i], translator, scorer, config);
    });
  }
  for (auto& t : workers) t.join();
  return out;
}

std::array<std::size_t, 3> split_sizes(std::size_t n, const std::array<double, 3>& ratios) {
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r >= 0.0)) throw InvalidArgument("split ratios must be non-negative");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument("split ratios must sum to 1, got " + std::to_string(sum));

  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double exact = ratios[i] * static_cast<double>(n);
    // Guard against 0.8 * 10 landing at 7.999...
    const double rounded = std::round(exact);
    const double base = std::abs(exact - rounded) < 1e-9 ? rounded : std::floor(exact);
    sizes[i] = static_cast<std::size_t>(base);
    remainder[i] = exact - base;
    assigned += sizes[i];
  }
  while (assigned < n) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < 3; ++i)
      if (remainder[i] > remainder[best]) best = i;
    ++sizes[best];
    remainder[best] = -1.0;
    ++assigned;
  }
  while (assigned > n) {  // only reachable through rounding noise
    for (std::size_t i = 3; i-- > 0;) {
      if (sizes[i] > 0) {
        --sizes[i];
        --assigned;
        break;
      }
    }
  }
  return sizes;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.uniform_int(0, i - 1)]);
  return order;
}

}  // namespace argenkit::para

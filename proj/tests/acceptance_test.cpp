// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "argenkit/codeswitch.hpp"
#include "argenkit/denoise.hpp"
#include "argenkit/harness.hpp"
#include "argenkit/metrics.hpp"
#include "argenkit/normalize.hpp"
#include "argenkit/paraphrase.hpp"
#include "argenkit/tokenizer.hpp"
#include "argenkit/translator.hpp"
#include "argenkit/utf8.hpp"
#include "fuzz.hpp"
#include "oracles.hpp"

using namespace argenkit;

namespace {

// Tolerances and limits.
constexpr double kArlueTol = 0.01;
constexpr double kPrecisionTol = 1e-9;
constexpr double kScoreTol = 1e-9;
constexpr double kArlueSeconds = 1.0;
constexpr double kMetricSeconds = 30.0;
constexpr double kDenoiseSeconds = 10.0;
constexpr double kDropLo = 0.14, kDropHi = 0.16;
constexpr double kCoverageLo = 0.25, kCoverageHi = 0.35;

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// ---------------------------------------------------------------------------

Check arlue_aggregation() {
  struct Column {
    const char* file;
    double avg_a, avg_b, score;
  };
  const Column columns[] = {
      {"arlue_sota.csv", 75.92, 77.15, 76.53},     {"arlue_mt5.csv", 74.61, 75.49, 75.05},
      {"arlue_arat5_tw.csv", 75.09, 75.56, 75.33}, {"arlue_arat5_msa.csv", 77.08, 77.93, 77.50},
      {"arlue_arat5.csv", 77.04, 78.01, 77.52},
  };
  Check c;
  const auto t0 = Clock::now();
  for (const auto& col : columns) {
    const auto lines = harness::read_lines(std::string(ARGENKIT_FIXTURE_DIR) + "/" + col.file);
    metrics::ClusterScoreTable table;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      std::stringstream ss(lines[i]);
      std::string name, a, b;
      std::getline(ss, name, ',');
      std::getline(ss, a, ',');
      std::getline(ss, b, ',');
      table.rows.push_back({name, std::stod(a), std::stod(b)});
    }
    c.expect(table.rows.size() == 7, std::string(col.file) + ": expected 7 clusters");
    const auto s = metrics::arlue_score(table);
    c.expect(std::abs(s.avg_a - col.avg_a) <= kArlueTol, std::string(col.file) + " avg_a " + fmt(s.avg_a));
    c.expect(std::abs(s.avg_b - col.avg_b) <= kArlueTol, std::string(col.file) + " avg_b " + fmt(s.avg_b));
    c.expect(std::abs(s.score - col.score) <= kArlueTol, std::string(col.file) + " score " + fmt(s.score));
  }
  const double secs = seconds_since(t0);
  c.expect(secs < kArlueSeconds, "runtime " + fmt(secs) + " s");
  return c;
}

// ---------------------------------------------------------------------------

oracle::Tokens toks(std::string_view s) { return utf8::split_whitespace(s); }

oracle::Tokens random_tokens(Rng& rng, std::size_t max_len, std::size_t vocab) {
  oracle::Tokens t;
  const std::size_t n = rng.uniform_int(0, max_len);
  for (std::size_t i = 0; i < n; ++i) t.emplace_back(1, static_cast<char>('a' + rng.uniform_int(0, vocab - 1)));
  return t;
}

Check metric_oracles() {
  Check c;
  const auto t0 = Clock::now();

  // Hand-derived clipped counts.
  struct Fixture {
    std::vector<std::string> hyps, refs;
    std::array<double, 4> p;
  };
  const std::vector<Fixture> fixtures{
      {{"the the the the the the the"}, {"the cat is on the mat"}, {2.0 / 7, 0, 0, 0}},
      {{"a b c d"}, {"a b c d"}, {1, 1, 1, 1}},
      {{"a b c d e"}, {"a b c d f"}, {4.0 / 5, 3.0 / 4, 2.0 / 3, 1.0 / 2}},
      {{"a b", "c d e f"}, {"a b", "c d e g"}, {5.0 / 6, 3.0 / 4, 1.0 / 2, 0}},
      {{"a a b"}, {"a b b"}, {2.0 / 3, 1.0 / 2, 0, 0}},
      {{"x y x y"}, {"x y z"}, {2.0 / 4, 1.0 / 3, 0, 0}},
  };
  for (const auto& f : fixtures) {
    std::vector<metrics::Tokens> h, r;
    for (const auto& s : f.hyps) h.push_back(toks(s));
    for (const auto& s : f.refs) r.push_back(toks(s));
    const auto b = metrics::bleu(h, r);
    for (int n = 0; n < 4; ++n)
      c.expect(std::abs(b.precisions[n] - f.p[n]) <= kPrecisionTol, "hand fixture '" + f.hyps[0] + "' p" +
                                                                         std::to_string(n + 1));
  }

  Rng rng(2024);
  for (int trial = 0; trial < 1000 && c.ok; ++trial) {
    const std::size_t n = rng.uniform_int(1, 10);
    std::vector<metrics::Tokens> h, r;
    for (std::size_t i = 0; i < n; ++i) {
      h.push_back(random_tokens(rng, 12, 3));
      r.push_back(random_tokens(rng, 12, 3));
    }
    const auto got = metrics::bleu(h, r);
    const auto want = oracle::bleu(h, r);
    for (int k = 0; k < 4; ++k)
      c.expect(std::abs(got.precisions[k] - want.precisions[k]) <= kPrecisionTol,
               "BLEU precision mismatch on random corpus " + std::to_string(trial));
    c.expect(std::abs(got.score - want.score) <= kScoreTol, "BLEU score mismatch on random corpus " +
                                                                std::to_string(trial));
  }

  for (int trial = 0; trial < 2000 && c.ok; ++trial) {
    const auto h = random_tokens(rng, 10, 3);
    const auto g = random_tokens(rng, 10, 3);
    for (int n = 1; n <= 2; ++n) {
      const auto got = metrics::rouge_n(h, g, n);
      const auto want = oracle::rouge_n(h, g, static_cast<std::size_t>(n));
      c.expect(std::abs(got.precision - want.p) <= kScoreTol && std::abs(got.recall - want.r) <= kScoreTol &&
                   std::abs(got.f1 - want.f) <= kScoreTol,
               "ROUGE-" + std::to_string(n) + " mismatch");
    }
    const auto a = random_tokens(rng, 8, 3);
    const auto b = random_tokens(rng, 8, 3);
    c.expect(metrics::lcs_length(a, b) == oracle::lcs_exhaustive(a, b), "LCS mismatch");
  }

  const double secs = seconds_since(t0);
  c.expect(secs < kMetricSeconds, "runtime " + fmt(secs) + " s");
  return c;
}

// ---------------------------------------------------------------------------

Check span_corruption() {
  Check c;
  const auto t0 = Clock::now();
  Rng meta(99);
  for (int i = 0; i < 10000 && c.ok; ++i) {
    const std::size_t len = meta.uniform_int(1, 60);
    denoise::Tokens t;
    for (std::size_t k = 0; k < len; ++k) t.push_back("t" + std::to_string(meta.uniform_int(0, 20)));
    denoise::CorruptionConfig cfg;
    cfg.seed = meta.next();
    cfg.drop_rate = meta.uniform01();
    cfg.max_sentinels = 99;
    const auto ex = denoise::corrupt(t, cfg, static_cast<std::uint64_t>(i));
    c.expect(denoise::reconstruct(ex) == t, "reconstruct(corrupt(x)) != x at case " + std::to_string(i));
  }

  denoise::Tokens hundred;
  for (int k = 0; k < 100; ++k) hundred.push_back("w" + std::to_string(k));
  denoise::CorruptionConfig cfg;
  cfg.drop_rate = 0.15;
  std::size_t dropped = 0;
  for (std::uint64_t trial = 0; trial < 10000; ++trial) {
    cfg.seed = trial;
    const auto ex = denoise::corrupt(hundred, cfg, 0);
    for (bool d : ex.dropped_mask) dropped += d;
  }
  const double frac = static_cast<double>(dropped) / (100.0 * 10000.0);
  c.expect(frac >= kDropLo && frac <= kDropHi, "drop fraction " + fmt(frac));

  const double secs = seconds_since(t0);
  c.expect(secs < kDenoiseSeconds, "runtime " + fmt(secs) + " s");
  if (c.ok) c.detail = "drop fraction " + fmt(frac);
  return c;
}

// ---------------------------------------------------------------------------

Check code_switch_synthesis() {
  Check c;
  const EchoTranslator echo;
  cs::CSConfig cfg;
  cfg.coverage = 0.30;
  cfg.arabic_only = false;
  cs::Tokens t;
  for (int k = 0; k < 50; ++k) t.push_back("ك" + std::to_string(k));

  double sum = 0.0;
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    cfg.seed = trial;
    const auto ex = cs::synthesize(t, echo, cfg, 0);
    sum += ex.replaced_fraction();
    std::size_t end = 0;
    for (const auto& s : ex.replaced_spans) {
      c.expect(s.start >= end, "overlapping spans at seed " + std::to_string(trial));
      end = s.start + s.length;
    }
    const auto again = cs::synthesize(t, echo, cfg, 0);
    c.expect(again.mixed_tokens == ex.mixed_tokens && again.replaced_spans == ex.replaced_spans,
             "non-deterministic output at seed " + std::to_string(trial));
  }
  const double mean = sum / 1000.0;
  c.expect(mean >= kCoverageLo && mean <= kCoverageHi, "mean replaced fraction " + fmt(mean));
  if (c.ok) c.detail = "mean replaced fraction " + fmt(mean);
  return c;
}

// ---------------------------------------------------------------------------

Check paraphrase_gates() {
  Check c;
  const para::MiningConfig cfg;
  auto expected = [](double sim, double ov) {
    const bool accept = sim >= 0.70 && sim <= 0.99 && ov >= 0.35 && ov <= 0.70;
    return accept;
  };
  std::vector<double> sims{0.0, 0.69, 0.6999999, 0.70, 0.7000001, 0.85, 0.9899999, 0.99, 0.9900001, 1.0};
  std::vector<double> ovs{0.0, 0.34, 0.3499999, 0.35, 0.3500001, 0.5, 0.6999999, 0.70, 0.7000001, 1.0};
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    sims.push_back(rng.uniform01());
    ovs.push_back(rng.uniform01());
  }
  std::size_t checked = 0;
  for (double s : sims) {
    for (double o : ovs) {
      const auto v = para::gate(s, o, cfg);
      c.expect((v == para::Verdict::kAccepted) == expected(s, o),
               "gate(" + fmt(s) + ", " + fmt(o) + ") = " + std::string(para::verdict_name(v)));
      ++checked;
    }
    c.expect(para::gate(1.0, s, cfg) != para::Verdict::kAccepted, "similarity 1.0 accepted");
  }
  if (c.ok) c.detail = std::to_string(checked) + " grid points";
  return c;
}

// ---------------------------------------------------------------------------

Check tokenizer() {
  Check c;
  Rng rng(31337);
  std::vector<std::string> corpus;
  for (int i = 0; i < 300; ++i) corpus.push_back(fuzz::utf8_text(rng, 40));
  const std::size_t floor = tok::default_specials().size() + 256;
  const auto model = tok::train(corpus, floor + 200);
  for (int i = 0; i < 10000 && c.ok; ++i) {
    const std::string s = fuzz::utf8_text(rng, 40);
    c.expect(model.decode(model.encode(s).ids) == s, "round trip failed on fuzz string " + std::to_string(i));
  }

  const std::vector<std::string> tiny{"abab", "abab", "abab"};
  const auto expected = oracle::most_frequent_pair(tiny);
  const auto m = tok::train(tiny, floor + 1);
  c.expect(expected.has_value() && m.merges().size() == 1 && m.piece(m.merges()[0].left) == expected->first &&
               m.piece(m.merges()[0].right) == expected->second,
           "tiny-corpus first merge differs from pair-count oracle");

  c.expect(tok::train(corpus, floor + 200).to_json() == model.to_json(), "training not byte-reproducible");
  return c;
}

// ---------------------------------------------------------------------------

Check normalization() {
  Check c;
  Rng rng(77);
  for (int i = 0; i < 5000 && c.ok; ++i) {
    const std::string s = fuzz::noisy_text(rng, 40);
    const std::string once = text::normalize(s).text;
    c.expect(text::normalize(once).text == once, "not idempotent on fuzz line " + std::to_string(i));
  }
  c.expect(text::strip_diacritics("كَتَبَ") == "كتب", "strip_diacritics fixture 1");
  c.expect(text::strip_diacritics("hello") == "hello", "strip_diacritics fixture 2");
  c.expect(text::strip_diacritics("الْعَرَبِيَّة") == "العربية", "strip_diacritics fixture 3");
  c.expect(text::mask_entities("@sam hi http://x.y/z") == "<USER> hi <URL>", "mask_entities fixture 1");
  c.expect(text::mask_entities("no links here") == "no links here", "mask_entities fixture 2");
  c.expect(text::mask_entities("see www.example.com.") == "see <URL>.", "mask_entities fixture 3");
  c.expect(text::squeeze_repeats("ههههه", 3) == "ه", "squeeze_repeats fixture 1");
  c.expect(text::squeeze_repeats("cool", 3) == "cool", "squeeze_repeats fixture 2");
  c.expect(text::squeeze_repeats("😂😂😂😂", 3) == "😂", "squeeze_repeats fixture 3");
  return c;
}

// ---------------------------------------------------------------------------

// Bin index by the bin definitions, one predicate per bin.
std::size_t oracle_bin(const std::vector<std::size_t>& b, std::size_t len, std::size_t* matches) {
  const std::size_t k = b.size();
  std::vector<bool> in(k + 1, false);
  in[0] = len < b[0];
  if (k == 1) {
    in[1] = len >= b[0];
  } else {
    in[1] = len >= b[0] && len <= b[1];
    for (std::size_t i = 2; i < k; ++i) in[i] = len > b[i - 1] && len <= b[i];
    in[k] = len > b[k - 1];
  }
  std::size_t bin = 0;
  *matches = 0;
  for (std::size_t i = 0; i <= k; ++i)
    if (in[i]) {
      bin = i;
      ++*matches;
    }
  return bin;
}

Check harness_checks() {
  Check c;
  Rng rng(8);
  for (int trial = 0; trial < 1000 && c.ok; ++trial) {
    harness::LengthBins bins;
    bins.boundaries.clear();
    const std::size_t k = rng.uniform_int(1, 5);
    std::size_t v = 0;
    for (std::size_t i = 0; i < k; ++i) {
      v += rng.uniform_int(1, 8);
      bins.boundaries.push_back(v);
    }
    for (int j = 0; j < 20; ++j) {
      const std::size_t len = rng.uniform_int(0, v + 10);
      std::size_t matches = 0;
      const std::size_t want = oracle_bin(bins.boundaries, len, &matches);
      c.expect(matches == 1, "bins do not partition length " + std::to_string(len));
      c.expect(bins.bin_of(len) == want, "bin_of(" + std::to_string(len) + ") disagrees with bin definition");
    }
  }

  // 30-pair fixture: per-bin BLEU equals filtering first and scoring with the oracle.
  std::vector<harness::Triple> triples;
  for (int i = 0; i < 30; ++i) {
    const std::size_t src_len = 3 + static_cast<std::size_t>(i) * 29 % 28;
    std::string src;
    for (std::size_t k = 0; k < src_len; ++k) src += (k ? " " : "") + std::string("s");
    std::string ref, hyp;
    const std::size_t ref_len = 4 + static_cast<std::size_t>(i) % 7;
    for (std::size_t k = 0; k < ref_len; ++k) {
      ref += (k ? " " : "") + std::string(1, static_cast<char>('a' + (k * 3 + i) % 5));
      if (k != static_cast<std::size_t>(i) % ref_len)
        hyp += (hyp.empty() ? "" : " ") + std::string(1, static_cast<char>('a' + (k * 3 + i) % 5));
    }
    triples.push_back({src, ref, hyp});
  }
  harness::EvalOptions raw;
  raw.normalize = false;
  const harness::LengthBins bins;
  const auto binned = harness::length_binned(triples, bins, harness::Task::kMt, raw);
  c.expect(binned.size() == 3, "expected three bins");
  std::size_t total = 0;
  for (std::size_t b = 0; b < binned.size(); ++b) {
    std::vector<oracle::Tokens> h, r;
    for (const auto& t : triples) {
      std::size_t matches = 0;
      if (oracle_bin(bins.boundaries, toks(t.source).size(), &matches) == b) {
        h.push_back(toks(t.hypothesis));
        r.push_back(toks(t.reference));
      }
    }
    total += binned[b].count;
    c.expect(binned[b].count == h.size(), "bin " + binned[b].label + " count");
    if (!h.empty()) {
      const double want = oracle::bleu(h, r).score;
      c.expect(std::abs(binned[b].scores.at("bleu") - want) <= kScoreTol,
               "bin " + binned[b].label + " BLEU " + fmt(binned[b].scores.at("bleu")) + " vs " + fmt(want));
    }
  }
  c.expect(total == 30, "bins do not cover the fixture");

  // Report group averages equal the mean of the member cells.
  std::vector<harness::EvalRun> runs;
  std::map<std::string, std::string> groups;
  const char* models[] = {"m1", "m2", "m3"};
  for (int d = 0; d < 12; ++d) {
    const std::string id = "ds" + std::to_string(d);
    groups[id] = d % 3 == 0 ? "MSA" : (d % 3 == 1 ? "DIA" : "CS");
    for (const char* m : models) {
      if (rng.uniform_int(0, 5) == 0) continue;
      harness::EvalRun run;
      run.model_id = m;
      run.dataset_id = id;
      run.split = "test";
      run.scores["bleu"] = 100.0 * rng.uniform01();
      runs.push_back(run);
    }
  }
  const auto tables = harness::build_report(runs, groups);
  for (const auto& t : tables) {
    for (const auto& avg : t.averages) {
      for (std::size_t m = 0; m < t.models.size(); ++m) {
        double sum = 0;
        std::size_t n = 0;
        for (const auto& row : t.rows) {
          if ((avg.label == "Average All" || row.group == avg.group) && row.cells[m]) {
            sum += *row.cells[m];
            ++n;
          }
        }
        if (n == 0) {
          c.expect(!avg.cells[m].has_value(), avg.label + " has a value with no members");
        } else {
          c.expect(avg.cells[m].has_value() && std::abs(*avg.cells[m] - metrics::round2(sum / n)) <= 1e-9,
                   avg.label + " for " + t.models[m] + " is not the member mean");
        }
      }
    }
  }
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"1 ARLUE aggregation reproduces published column scores and averages", arlue_aggregation},
      {"2 BLEU/ROUGE/LCS match independent oracles", metric_oracles},
      {"3 span corruption round-trips and drops at the configured rate", span_corruption},
      {"4 code-switch coverage, disjoint spans, determinism", code_switch_synthesis},
      {"5 paraphrase gates match the predicate exactly", paraphrase_gates},
      {"6 tokenizer round trip, first merge oracle, reproducible training", tokenizer},
      {"7 normalization idempotence and single-rule fixtures", normalization},
      {"8 harness length bins, per-bin BLEU, report averages", harness_checks},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = Clock::now();
    Check c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    const double secs = seconds_since(t0);
    std::printf("%s  criterion %s  (%.2f s)%s%s\n", c.ok ? "PASS" : "FAIL", name.c_str(), secs,
                c.detail.empty() ? "" : "  ", c.detail.c_str());
    failures += !c.ok;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "argenkit/codeswitch.hpp"
#include "argenkit/denoise.hpp"
#include "argenkit/error.hpp"
#include "argenkit/harness.hpp"
#include "argenkit/metrics.hpp"
#include "argenkit/normalize.hpp"
#include "argenkit/paraphrase.hpp"
#include "argenkit/tokenizer.hpp"
#include "argenkit/utf8.hpp"
#include "argenkit/version.hpp"
#include "json.hpp"

namespace argenkit::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Streaming helpers

class Input {
 public:
  Input(const std::string& path, std::istream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
      if (!*file_) throw DataError("cannot open " + path);
      stream_ = file_.get();
    }
  }
  std::istream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* stream_;
};

using LineFn = std::function<std::optional<std::string>(const std::string& line, std::uint64_t record)>;

// Reads lines in bounded batches, maps them (in parallel when jobs > 1) and
// writes results in input order. Blank lines are skipped; `record` counts
// the non-blank lines seen so far. A failure is reported with its line
// number after every earlier result has been written.
void stream_lines(std::istream& in, std::ostream& out, unsigned jobs, const LineFn& fn) {
  const std::size_t batch_size = 512 * std::max(1u, jobs);
  std::uint64_t line_no = 0;
  std::uint64_t record = 0;
  bool first = true;

  struct Item {
    std::string line;
    std::uint64_t line_no;
    std::uint64_t record;
    std::optional<std::string> result;
    std::exception_ptr error;
  };
  std::vector<Item> batch;
  std::string line;

  auto work = [&](Item& item) {
    try {
      item.result = fn(item.line, item.record);
    } catch (...) {
      item.error = std::current_exception();
    }
  };

  auto flush = [&] {
    if (jobs <= 1 || batch.size() < 2) {
      for (auto& item : batch) work(item);
    } else {
      std::vector<std::thread> workers;
      const unsigned n = std::min<unsigned>(jobs, static_cast<unsigned>(batch.size()));
      for (unsigned w = 0; w < n; ++w)
        workers.emplace_back([&, w] {
          for (std::size_t i = w; i < batch.size(); i += n) work(batch[i]);
        });
      for (auto& t : workers) t.join();
    }
    for (auto& item : batch) {
      if (item.error) {
        out.flush();
        try {
          std::rethrow_exception(item.error);
        } catch (const std::exception& e) {
          throw DataError("line " + std::to_string(item.line_no) + ": " + e.what());
        }
      }
      if (item.result) out << *item.result << '\n';
    }
    batch.clear();
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (first) view = utf8::strip_bom(view);
    first = false;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (utf8::split_whitespace_views(view).empty()) continue;
    batch.push_back({std::string(view), line_no, record++, std::nullopt, nullptr});
    if (batch.size() >= batch_size) flush();
  }
  flush();
  out.flush();
}

json parse_json_line(const std::string& line) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
}

// {"tokens": [...]} or {"text": "..."} (whitespace-split).
std::vector<std::string> tokens_from(const json& doc) {
  try {
    if (doc.contains("tokens")) return doc.at("tokens").get<std::vector<std::string>>();
    if (doc.contains("text")) return utf8::split_whitespace(doc.at("text").get<std::string>());
  } catch (const json::exception& e) {
    throw DataError(std::string("bad token record: ") + e.what());
  }
  throw DataError("record needs a \"tokens\" array or a \"text\" string");
}

std::string dump(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::strict); }

std::pair<double, double> parse_range(const std::string& text, const std::string& what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument(what + " must be MIN:MAX, got '" + text + "'");
  try {
    std::size_t used = 0;
    const double lo = std::stod(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("");
    const std::string hi_text = text.substr(colon + 1);
    const double hi = std::stod(hi_text, &used);
    if (used != hi_text.size()) throw std::invalid_argument("");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw InvalidArgument(what + " must be MIN:MAX, got '" + text + "'");
  }
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::logic_error&) {
    throw DataError(what + ": not a number: '" + text + "'");
  }
}

// ---------------------------------------------------------------------------
// Options shared across subcommands

struct Globals {
  std::uint64_t seed = 0;
  std::string data_dir;
  unsigned jobs = 1;
  std::string config;

  fs::path data_root() const { return data_dir.empty() ? harness::data_dir_from_env() : fs::path(data_dir); }
};

std::uint64_t seed_or(const std::optional<std::uint64_t>& local, const Globals& g) { return local ? *local : g.seed; }

// ---------------------------------------------------------------------------
// normalize

struct NormalizeOpts {
  std::string input;
  std::string rules = "all";
  int repeat_threshold = 3;
};

text::NormalizationConfig config_from_rules(const std::string& spec, int threshold) {
  const auto items = split_commas(spec);
  const bool only_negations =
      !items.empty() && std::all_of(items.begin(), items.end(), [](const std::string& s) { return s[0] == '-'; });
  text::NormalizationConfig config = only_negations ? text::NormalizationConfig{} : text::NormalizationConfig::none();
  config.repeat_threshold = threshold;
  auto set = [&](text::Rule r, bool on) {
    switch (r) {
      case text::Rule::kHtml: config.strip_html = on; break;
      case text::Rule::kUrls: config.mask_urls = on; break;
      case text::Rule::kMentions: config.mask_mentions = on; break;
      case text::Rule::kDiacritics: config.strip_diacritics = on; break;
      case text::Rule::kTatweel: config.remove_tatweel = on; break;
      case text::Rule::kHash: config.strip_hash_signs = on; break;
      case text::Rule::kRepeats: config.squeeze_repeats = on; break;
    }
  };
  for (const auto& item : items) {
    if (item == "all") {
      const int t = config.repeat_threshold;
      config = {};
      config.repeat_threshold = t;
    } else if (item == "none") {
      const int t = config.repeat_threshold;
      config = text::NormalizationConfig::none();
      config.repeat_threshold = t;
    } else if (item[0] == '-') {
      set(text::parse_rule(item.substr(1)), false);
    } else {
      set(text::parse_rule(item), true);
    }
  }
  config.validate();
  return config;
}

int cmd_normalize(const NormalizeOpts& o, const Globals& g, std::istream& in, std::ostream& out) {
  const auto config = config_from_rules(o.rules, o.repeat_threshold);
  Input input(o.input, in);
  // Normalization keeps blank lines so output stays line-aligned.
  std::string line;
  bool first = true;
  std::vector<std::string> batch;
  auto flush = [&] {
    std::vector<std::string> results(batch.size());
    if (g.jobs <= 1) {
      for (std::size_t i = 0; i < batch.size(); ++i) results[i] = text::normalize(batch[i], config).text;
    } else {
      std::vector<std::thread> workers;
      for (unsigned w = 0; w < g.jobs; ++w)
        workers.emplace_back([&, w] {
          for (std::size_t i = w; i < batch.size(); i += g.jobs) results[i] = text::normalize(batch[i], config).text;
        });
      for (auto& t : workers) t.join();
    }
    for (const auto& r : results) out << r << '\n';
    batch.clear();
  };
  while (std::getline(input.get(), line)) {
    std::string_view view = line;
    if (first) view = utf8::strip_bom(view);
    first = false;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    batch.emplace_back(view);
    if (batch.size() >= 512 * std::max(1u, g.jobs)) flush();
  }
  flush();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// tokenizer

struct TrainTokOpts {
  std::string input;
  std::size_t vocab_size = tok::kDefaultVocabSize;
  std::string output;
  std::size_t sentinels = tok::kDefaultSentinels;
};

int cmd_train_tokenizer(const TrainTokOpts& o, std::istream& in, std::ostream&, std::ostream& err) {
  Input input(o.input, in);
  bool first = true;
  auto model = tok::train(
      [&](std::string& line) {
        if (!std::getline(input.get(), line)) return false;
        if (first) line = std::string(utf8::strip_bom(line));
        first = false;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
      },
      o.vocab_size, tok::default_specials(o.sentinels));
  model.save(o.output);
  err << "trained " << model.size() << " pieces (" << model.merges().size() << " merges) -> " << o.output << '\n';
  return kExitOk;
}

struct CodecOpts {
  std::string model;
  std::string input;
  bool offsets = false;
};

int cmd_encode(const CodecOpts& o, const Globals& g, std::istream& in, std::ostream& out) {
  const auto model = tok::SubwordModel::load(o.model);
  Input input(o.input, in);
  stream_lines(input.get(), out, g.jobs, [&](const std::string& line, std::uint64_t) -> std::optional<std::string> {
    const json doc = parse_json_line(line);
    if (!doc.contains("text") || !doc["text"].is_string()) throw DataError("record needs a \"text\" string");
    const auto enc = model.encode(doc["text"].get<std::string>());
    json res;
    res["ids"] = enc.ids;
    if (o.offsets) res["offsets"] = enc.offsets;
    return dump(res);
  });
  return kExitOk;
}

int cmd_decode(const CodecOpts& o, const Globals& g, std::istream& in, std::ostream& out) {
  const auto model = tok::SubwordModel::load(o.model);
  Input input(o.input, in);
  stream_lines(input.get(), out, g.jobs, [&](const std::string& line, std::uint64_t) -> std::optional<std::string> {
    const json doc = parse_json_line(line);
    std::vector<tok::TokenId> ids;
    try {
      ids = doc.at("ids").get<std::vector<tok::TokenId>>();
    } catch (const json::exception&) {
      throw DataError("record needs an \"ids\" array of non-negative integers");
    }
    const std::string text = model.decode(ids);
    if (!utf8::is_valid(text)) throw DataError("ids decode to invalid UTF-8");
    json res;
    res["text"] = text;
    return dump(res);
  });
  return kExitOk;
}

// ---------------------------------------------------------------------------
// corrupt

struct CorruptOpts {
  std::string input;
  double rate = 0.15;
  std::optional<std::uint64_t> seed;
  std::size_t max_sentinels = 99;
  bool with_mask = false;
};

int cmd_corrupt(const CorruptOpts& o, const Globals& g, std::istream& in, std::ostream& out) {
  denoise::CorruptionConfig config;
  config.drop_rate = o.rate;
  config.seed = seed_or(o.seed, g);
  config.max_sentinels = o.max_sentinels;
  config.validate();
  Input input(o.input, in);
  stream_lines(input.get(), out, g.jobs, [&](const std::string& line, std::uint64_t record) -> std::optional<std::string> {
    const auto ex = denoise::corrupt(tokens_from(parse_json_line(line)), config, record);
    json res;
    res["input"] = ex.input_tokens;
    res["target"] = ex.target_tokens;
    if (o.with_mask) res["dropped"] = ex.dropped_mask;
    return dump(res);
  });
  return kExitOk;
}

// ---------------------------------------------------------------------------
// codeswitch

struct CodeswitchOpts {
  std::string input;
  double coverage = 0.30;
  std::string ngram = "1:3";
  std::string lang = "en";
  std::string dict;
  bool echo = false;
  bool keep_unknown = false;
  bool all_tokens = false;
  std::optional<std::uint64_t> seed;
};

int cmd_codeswitch(const CodeswitchOpts& o, const Globals& g, std::istream& in, std::ostream& out) {
  cs::CSConfig config;
  config.coverage = o.coverage;
  const auto [lo, hi] = parse_range(o.ngram, "--ngram");
  if (lo < 1 || hi < lo || lo != static_cast<std::size_t>(lo) || hi != static_cast<std::size_t>(hi))
    throw InvalidArgument("--ngram must be MIN:MAX with 1 <= MIN <= MAX");
  config.ngram_min = static_cast<std::size_t>(lo);
  config.ngram_max = static_cast<std::size_t>(hi);
  config.target_lang = o.lang;
  config.seed = seed_or(o.seed, g);
  config.arabic_only = !o.all_tokens;
  config.validate();

  std::unique_ptr<Translator> translator;
  if (o.echo) {
    translator = std::make_unique<EchoTranslator>();
  } else if (!o.dict.empty()) {
    translator = std::make_unique<DictionaryTranslator>(DictionaryTranslator::load_tsv(o.dict, o.keep_unknown));
  } else {
    throw InvalidArgument("codeswitch needs --dict <tsv> or --echo");
  }
  const unsigned jobs = translator->thread_safe() ? g.jobs : 1;

  Input input(o.input, in);
  stream_lines(input.get(), out, jobs, [&](const std::string& line, std::uint64_t record) -> std::optional<std::string> {
    const auto ex = cs::synthesize(tokens_from(parse_json_line(line)), *translator, config, record);
    json res;
    res["source"] = ex.source_tokens;
    res["mixed"] = ex.mixed_tokens;
    json spans = json::array();
    for (const auto& s : ex.replaced_spans)
      spans.push_back({{"start", s.start}, {"length", s.length}, {"replacement", s.replacement}});
    res["spans"] = std::move(spans);
    res["replaced_fraction"] = ex.replaced_fraction();
    res["under_coverage"] = ex.under_coverage;
    return dump(res);
  });
  return kExitOk;
}

// ---------------------------------------------------------------------------
// mine-paraphrases

struct MineOpts {
  std::string input;
  std::string sim = "0.70:0.99";
  std::string overlap = "0.35:0.70";
  std::string denominator = "union";
  std::string dict;
  bool accepted_only = false;
  bool no_normalize = false;
};

// Ports backed by values already present in the input record.
class FixedTranslator final : public Translator {
 public:
  explicit FixedTranslator(std::string text) : text_(std::move(text)) {}
  std::string translate(std::string_view, std::string_view) const override { return text_; }

 private:
  std::string text_;
};

class FixedScorer final : public para::SimilarityScorer {
 public:
  explicit FixedScorer(double value) : value_(value) {}
  double score(std::string_view, std::string_view) const override { return value_; }

 private:
  double value_;
};

int cmd_mine(const MineOpts& o, const Globals& g, std::istream& in, std::ostream& out) {
  para::MiningConfig config;
  std::tie(config.sim_min, config.sim_max) = parse_range(o.sim, "--sim");
  std::tie(config.ov_min, config.ov_max) = parse_range(o.overlap, "--overlap");
  if (o.denominator == "union") {
    config.denominator = para::OverlapDenominator::kUnion;
  } else if (o.denominator == "longer") {
    config.denominator = para::OverlapDenominator::kLonger;
  } else {
    throw InvalidArgument("--overlap-denominator must be union or longer");
  }
  config.normalize_for_overlap = !o.no_normalize;
  config.validate();

  std::unique_ptr<DictionaryTranslator> dict;
  if (!o.dict.empty()) dict = std::make_unique<DictionaryTranslator>(DictionaryTranslator::load_tsv(o.dict));
  const para::TokenCosineScorer cosine;

  Input input(o.input, in);
  stream_lines(input.get(), out, g.jobs, [&](const std::string& line, std::uint64_t) -> std::optional<std::string> {
    para::ParallelPair pair;
    std::optional<std::string> mt;
    std::optional<double> sim;
    if (!line.empty() && line.front() == '{') {
      const json doc = parse_json_line(line);
      try {
        pair.foreign = doc.at("foreign").get<std::string>();
        pair.arabic = doc.at("arabic").get<std::string>();
        if (doc.contains("mt")) mt = doc["mt"].get<std::string>();
        if (doc.contains("similarity")) sim = doc["similarity"].get<double>();
      } catch (const json::exception& e) {
        throw DataError(std::string("bad pair record: ") + e.what());
      }
    } else {
      std::vector<std::string> cols;
      std::size_t start = 0;
      for (;;) {
        const auto tab = line.find('\t', start);
        cols.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
      }
      if (cols.size() < 2 || cols.size() > 4)
        throw DataError("expected 2-4 tab-separated columns (foreign, arabic[, mt[, similarity]])");
      pair.foreign = cols[0];
      pair.arabic = cols[1];
      if (cols.size() >= 3 && !cols[2].empty()) mt = cols[2];
      if (cols.size() == 4) sim = parse_double(cols[3], "similarity column");
    }
    if (!mt && !dict) throw DataError("no machine translation in the record and no --dict given");

    const FixedTranslator fixed_mt(mt.value_or(""));
    const Translator& translator = mt ? static_cast<const Translator&>(fixed_mt) : *dict;
    const FixedScorer fixed_sim(sim.value_or(0.0));
    const para::SimilarityScorer& scorer =
        sim ? static_cast<const para::SimilarityScorer&>(fixed_sim) : static_cast<const para::SimilarityScorer&>(cosine);

    const auto c = para::mine_one(pair, translator, scorer, config);
    if (o.accepted_only && !c.accepted()) return std::nullopt;
    nlohmann::ordered_json res;
    res["a"] = c.side_a;
    res["b"] = c.side_b;
    res["similarity"] = c.similarity;
    res["overlap"] = c.overlap;
    res["verdict"] = std::string(para::verdict_name(c.verdict));
    if (!c.error.empty()) res["error"] = c.error;
    return res.dump();
  });
  return kExitOk;
}

// ---------------------------------------------------------------------------
// split

struct SplitOpts {
  std::string input;
  std::string ratios = "0.8,0.1,0.1";
  std::string output_prefix;
  std::optional<std::uint64_t> seed;
};

int cmd_split(const SplitOpts& o, const Globals& g, std::istream& in, std::ostream& out) {
  const auto parts = split_commas(o.ratios);
  if (parts.size() != 3) throw InvalidArgument("--ratios needs three comma-separated values");
  std::array<double, 3> ratios{};
  for (std::size_t i = 0; i < 3; ++i) {
    try {
      ratios[i] = parse_double(parts[i], "--ratios");
    } catch (const DataError& e) {
      throw InvalidArgument(e.what());
    }
  }
  para::split_sizes(0, ratios);  // validates before touching the input

  std::vector<std::string> records;
  if (o.input.empty() || o.input == "-") {
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) records.push_back(line);
    }
  } else {
    for (auto& line : harness::read_lines(o.input))
      if (!line.empty()) records.push_back(std::move(line));
  }
  const auto splits = para::split_dataset(records, ratios, seed_or(o.seed, g));
  const std::array<std::pair<const char*, const std::vector<std::string>*>, 3> named{
      {{"train", &splits.train}, {"dev", &splits.dev}, {"test", &splits.test}}};
  nlohmann::ordered_json sizes;
  for (const auto& [name, recs] : named) {
    std::string content;
    for (const auto& r : *recs) content += r + "\n";
    harness::write_file_atomic(o.output_prefix + "." + name, content);
    sizes[name] = recs->size();
  }
  out << sizes.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvalOpts {
  std::string task;
  std::string hyp;
  std::string ref;
  std::string src;
  std::string bins = "10,20";
  bool no_normalize = false;
  std::string registry;
  std::string dataset;
  std::string split;
  std::string model;
  std::string runs;
  bool force = false;
};

harness::LengthBins parse_bins(const std::string& text) {
  harness::LengthBins bins;
  bins.boundaries.clear();
  for (const auto& item : split_commas(text)) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size()) throw InvalidArgument("bad --bins value '" + item + "'");
    bins.boundaries.push_back(v);
  }
  bins.validate();
  return bins;
}

json scores_json(const harness::Scores& scores) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : scores) j[k] = metrics::round2(v);
  return json::parse(j.dump());
}

int cmd_evaluate(const EvalOpts& o, const Globals& g, std::ostream& out, std::ostream& err) {
  harness::EvalOptions options;
  options.normalize = !o.no_normalize;
  if (o.hyp.empty()) throw InvalidArgument("evaluate needs --hyp");

  if (!o.dataset.empty()) {
    if (o.registry.empty() || o.split.empty() || o.model.empty())
      throw InvalidArgument("registry mode needs --registry, --dataset, --split and --model");
    const fs::path root = g.data_root();
    const auto registry = harness::load_registry(harness::resolve(o.registry, root));
    const auto& spec = harness::find_dataset(registry, o.dataset);
    std::optional<harness::RunStore> store;
    if (!o.runs.empty()) {
      store.emplace(o.runs);
      if (!o.force && store->has_test_run(o.model, spec.id, o.split))
        throw harness::DuplicateTestEvaluation(o.model + " was already evaluated on " + spec.id + "/" + o.split +
                                               "; select models on dev and pass --force to re-run a test split");
    }
    harness::LoadedDataset dataset{spec, {}};
    dataset.splits.emplace(o.split, harness::load_split(spec, o.split, root));
    for (const auto& w : dataset.size_mismatches()) err << "warning: " << w << '\n';
    harness::EvalRun run;
    run.model_id = o.model;
    run.dataset_id = spec.id;
    run.split = o.split;
    run.hypotheses_path = o.hyp;
    harness::evaluate_run(run, dataset, options, root);
    if (store) store->record(run, o.force);
    out << scores_json(run.scores).dump() << '\n';
    return kExitOk;
  }

  if (o.task.empty() || o.ref.empty()) throw InvalidArgument("evaluate needs --task, --hyp and --ref (or --dataset)");
  const auto task = harness::parse_task(o.task);
  const auto hyps = harness::read_lines(o.hyp);
  const auto refs = harness::read_lines(o.ref);
  json result = scores_json(harness::score_task(task, hyps, refs, options));

  if (!o.src.empty()) {
    const auto bins = parse_bins(o.bins);
    const auto srcs = harness::read_lines(o.src);
    if (srcs.size() != hyps.size())
      throw DataError("source count " + std::to_string(srcs.size()) + " differs from hypothesis count " +
                      std::to_string(hyps.size()));
    std::vector<harness::Triple> triples;
    for (std::size_t i = 0; i < srcs.size(); ++i) triples.push_back({srcs[i], refs[i], hyps[i]});
    json binned = json::array();
    for (const auto& b : harness::length_binned(triples, bins, task, options))
      binned.push_back({{"bin", b.label}, {"count", b.count}, {"scores", scores_json(b.scores)}});
    result["length_bins"] = std::move(binned);
  }
  out << result.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// arlue

metrics::ClusterScoreTable read_cluster_table(const std::string& path) {
  metrics::ClusterScoreTable table;
  const auto lines = harness::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    const auto cols = split_commas(line);
    const std::string where = path + ":" + std::to_string(i + 1);
    if (cols.size() != 3) throw DataError(where + ": expected cluster,metric_a,metric_b");
    double a = 0, b = 0;
    try {
      a = parse_double(cols[1], where);
      b = parse_double(cols[2], where);
    } catch (const DataError&) {
      if (table.rows.empty() && i == 0) continue;  // header
      throw;
    }
    table.rows.push_back({cols[0], a, b});
  }
  try {
    table.validate();
  } catch (const InvalidArgument& e) {
    throw DataError(path + ": " + e.what());
  }
  return table;
}

int cmd_arlue(const std::string& table_path, std::ostream& out) {
  const auto table = read_cluster_table(table_path);
  const auto s = metrics::arlue_score(table);
  nlohmann::ordered_json res;
  res["clusters"] = table.rows.size();
  res["avg_a"] = metrics::round2(s.avg_a);
  res["avg_b"] = metrics::round2(s.avg_b);
  res["score"] = metrics::round2(s.score);
  out << res.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report

struct ReportOpts {
  std::string runs;
  std::string registry;
  std::string out_dir = ".";
};

int cmd_report(const ReportOpts& o, const Globals& g, std::ostream& out, std::ostream& err) {
  const harness::RunStore store(o.runs);
  std::map<std::string, std::string> groups;
  if (!o.registry.empty())
    groups = harness::groups_from_registry(harness::load_registry(harness::resolve(o.registry, g.data_root())));
  const auto tables = harness::build_report(store.runs(), groups);
  const std::string md = harness::render_markdown(tables);
  fs::create_directories(o.out_dir);
  harness::write_file_atomic(fs::path(o.out_dir) / "report.md", md);
  harness::write_file_atomic(fs::path(o.out_dir) / "report.csv", harness::render_csv(tables));
  out << md;
  err << "wrote " << (fs::path(o.out_dir) / "report.md").string() << " and report.csv\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// stats

struct StatsOpts {
  std::string input;
  bool by_script = false;
  std::size_t min_words = 3;
};

int cmd_cs_rate(const StatsOpts& o, std::istream& in, std::ostream& out) {
  Input input(o.input, in);
  const cs::ScriptIdentifier lid;
  cs::CodeSwitchStats total;
  std::string line;
  while (std::getline(input.get(), line)) total += cs::code_switch_stats(line, cs::contains_arabic, o.by_script ? &lid : nullptr);
  if (o.by_script) {
    nlohmann::ordered_json res;
    res["tokens"] = total.tokens;
    res["non_arabic"] = total.non_arabic;
    res["rate"] = total.rate();
    res["by_script"] = total.by_language;
    out << res.dump() << '\n';
  } else {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << total.rate();
    out << os.str() << '\n';
  }
  return kExitOk;
}

int cmd_arabic_filter(const StatsOpts& o, std::istream& in, std::ostream& out) {
  Input input(o.input, in);
  std::string line;
  while (std::getline(input.get(), line))
    if (cs::has_min_arabic_words(line, o.min_words)) out << line << '\n';
  return kExitOk;
}

std::string version_string() {
  return "argenkit " + std::string(kVersion) + " (tokenizer model format " + std::to_string(kTokenizerFormatVersion) +
         ", run record format " + std::to_string(kRunRecordFormatVersion) + ")";
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Arabic text-to-text corpus and evaluation toolkit", "argenkit"};
  app.set_version_flag("--version", version_string());
  app.set_config("--config", "", "INI-style config file; [section] per subcommand, flags override");
  app.allow_config_extras(false);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Default seed for randomized subcommands")->capture_default_str();
  app.add_option("--data-dir,--data_dir", g.data_dir, "Root for relative registry paths (default $ARGENKIT_DATA_DIR)");
  app.add_option("--jobs", g.jobs, "Record-level worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();

  NormalizeOpts norm;
  auto* normalize = app.add_subcommand("normalize", "Normalize UTF-8 lines");
  normalize->add_option("--input", norm.input, "Input file (default stdin)");
  normalize->add_option("--rules", norm.rules, "Comma list: all, none, rule names, -rule to disable")->capture_default_str();
  normalize->add_option("--repeat-threshold,--repeat_threshold", norm.repeat_threshold)->capture_default_str();

  TrainTokOpts train;
  auto* train_tok = app.add_subcommand("train-tokenizer", "Train a byte-level BPE model");
  train_tok->add_option("--input", train.input, "Training corpus, one text per line")->required();
  train_tok->add_option("--vocab-size,--vocab_size", train.vocab_size)->capture_default_str();
  train_tok->add_option("--output", train.output, "Model JSON path")->required();
  train_tok->add_option("--sentinels", train.sentinels, "Number of <extra_id_N> specials")->capture_default_str();

  CodecOpts enc;
  auto* encode = app.add_subcommand("encode", "JSONL {\"text\"} -> {\"ids\"}");
  encode->add_option("--model", enc.model)->required();
  encode->add_option("--input", enc.input);
  encode->add_flag("--offsets", enc.offsets, "Also emit byte offsets");
  CodecOpts dec;
  auto* decode = app.add_subcommand("decode", "JSONL {\"ids\"} -> {\"text\"}");
  decode->add_option("--model", dec.model)->required();
  decode->add_option("--input", dec.input);

  CorruptOpts cor;
  auto* corrupt = app.add_subcommand("corrupt", "Span-corrupt JSONL token records");
  corrupt->add_option("--input", cor.input);
  corrupt->add_option("--rate", cor.rate)->capture_default_str();
  corrupt->add_option("--seed", cor.seed);
  corrupt->add_option("--max-sentinels,--max_sentinels", cor.max_sentinels)->capture_default_str();
  corrupt->add_flag("--with-mask", cor.with_mask, "Emit the dropped mask");

  CodeswitchOpts csw;
  auto* codeswitch = app.add_subcommand("codeswitch", "Synthesize code-switched JSONL records");
  codeswitch->add_option("--input", csw.input);
  codeswitch->add_option("--coverage", csw.coverage)->capture_default_str();
  codeswitch->add_option("--ngram", csw.ngram, "MIN:MAX span length")->capture_default_str();
  codeswitch->add_option("--lang", csw.lang)->capture_default_str();
  codeswitch->add_option("--dict", csw.dict, "Two-column TSV phrase table");
  codeswitch->add_flag("--echo", csw.echo, "Mark spans instead of translating");
  codeswitch->add_flag("--keep-unknown", csw.keep_unknown, "Pass words missing from --dict through");
  codeswitch->add_flag("--all-tokens", csw.all_tokens, "Allow spans over non-Arabic tokens");
  codeswitch->add_option("--seed", csw.seed);

  MineOpts mine;
  auto* mine_cmd = app.add_subcommand("mine-paraphrases", "Gate translated pairs into paraphrase candidates");
  mine_cmd->add_option("--input", mine.input, "TSV (foreign, arabic[, mt[, similarity]]) or JSONL");
  mine_cmd->add_option("--sim", mine.sim)->capture_default_str();
  mine_cmd->add_option("--overlap", mine.overlap)->capture_default_str();
  mine_cmd->add_option("--overlap-denominator", mine.denominator, "union | longer")->capture_default_str();
  mine_cmd->add_option("--dict", mine.dict, "Phrase table used when a record has no mt column");
  mine_cmd->add_flag("--accepted-only", mine.accepted_only);
  mine_cmd->add_flag("--no-normalize", mine.no_normalize, "Compute overlap on raw text");

  SplitOpts spl;
  auto* split = app.add_subcommand("split", "Seeded train/dev/test split of a line file");
  split->add_option("--input", spl.input);
  split->add_option("--ratios", spl.ratios)->capture_default_str();
  split->add_option("--output-prefix,--output_prefix", spl.output_prefix)->required();
  split->add_option("--seed", spl.seed);

  EvalOpts ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score hypotheses against references");
  evaluate->add_option("--task", ev.task, "mt|cst|summarization|ntg|qg|tr|pph|cls|qa");
  evaluate->add_option("--hyp", ev.hyp);
  evaluate->add_option("--ref", ev.ref);
  evaluate->add_option("--src", ev.src, "Sources for length-binned scores");
  evaluate->add_option("--bins", ev.bins)->capture_default_str();
  evaluate->add_flag("--no-normalize", ev.no_normalize);
  evaluate->add_option("--registry", ev.registry);
  evaluate->add_option("--dataset", ev.dataset);
  evaluate->add_option("--split", ev.split);
  evaluate->add_option("--model", ev.model);
  evaluate->add_option("--runs", ev.runs, "Run store (JSONL) to record into");
  evaluate->add_flag("--force", ev.force, "Allow re-evaluating a test split");

  std::string arlue_table;
  auto* arlue = app.add_subcommand("arlue", "Composite score from a cluster table CSV");
  arlue->add_option("--table", arlue_table, "CSV: cluster,metric_a,metric_b")->required();

  ReportOpts rep;
  auto* report = app.add_subcommand("report", "Markdown and CSV result tables");
  report->add_option("--runs", rep.runs)->required();
  report->add_option("--registry", rep.registry);
  report->add_option("--out", rep.out_dir)->capture_default_str();

  StatsOpts st;
  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  stats->require_subcommand(1);
  auto* cs_rate = stats->add_subcommand("cs-rate", "Fraction of non-Arabic tokens");
  cs_rate->add_option("--input", st.input);
  cs_rate->add_flag("--by-script", st.by_script, "Break the non-Arabic tokens down by script");
  auto* arabic_filter = stats->add_subcommand("arabic-filter", "Keep lines with at least N Arabic words");
  arabic_filter->add_option("--input", st.input);
  arabic_filter->add_option("--min-words,--min_words", st.min_words)->capture_default_str();

  if (args.empty()) {
    err << app.help();
    return kExitUsage;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << version_string() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "argenkit: " << e.what() << '\n';
    for (const auto* sub : app.get_subcommands()) {
      err << sub->help();
      return kExitUsage;
    }
    err << "Run with --help for usage.\n";
    return kExitUsage;
  }

  try {
    if (normalize->parsed()) return cmd_normalize(norm, g, in, out);
    if (train_tok->parsed()) return cmd_train_tokenizer(train, in, out, err);
    if (encode->parsed()) return cmd_encode(enc, g, in, out);
    if (decode->parsed()) return cmd_decode(dec, g, in, out);
    if (corrupt->parsed()) return cmd_corrupt(cor, g, in, out);
    if (codeswitch->parsed()) return cmd_codeswitch(csw, g, in, out);
    if (mine_cmd->parsed()) return cmd_mine(mine, g, in, out);
    if (split->parsed()) return cmd_split(spl, g, in, out);
    if (evaluate->parsed()) return cmd_evaluate(ev, g, out, err);
    if (arlue->parsed()) return cmd_arlue(arlue_table, out);
    if (report->parsed()) return cmd_report(rep, g, out, err);
    if (cs_rate->parsed()) return cmd_cs_rate(st, in, out);
    if (arabic_filter->parsed()) return cmd_arabic_filter(st, in, out);
  } catch (const InvalidArgument& e) {
    err << "argenkit: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "argenkit: " << e.what() << '\n';
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace argenkit::cli

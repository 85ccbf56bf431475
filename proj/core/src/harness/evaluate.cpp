#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "argenkit/harness.hpp"
#include "argenkit/metrics.hpp"
#include "argenkit/utf8.hpp"
#include "json.hpp"

namespace argenkit::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> tokens_for_scoring(const std::string& line, const EvalOptions& options) {
  return utf8::split_whitespace(options.normalize ? text::normalize(line, options.normalization).text : line);
}

std::string trim(std::string_view s) {
  const auto parts = utf8::split_whitespace_views(s);
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ' ';
    out += parts[i];
  }
  return out;
}

}  // namespace

Scores score_task(Task task, const std::vector<std::string>& hypotheses, const std::vector<std::string>& references,
                  const EvalOptions& options) {
  if (hypotheses.size() != references.size())
    throw DataError("hypothesis count " + std::to_string(hypotheses.size()) + " differs from reference count " +
                    std::to_string(references.size()));
  if (hypotheses.empty()) throw DataError("nothing to score");
  const double n = static_cast<double>(hypotheses.size());
  Scores scores;

  switch (task) {
    case Task::kSummarization: {
      double r1 = 0, r2 = 0, rl = 0;
      for (std::size_t i = 0; i < hypotheses.size(); ++i) {
        const auto h = tokens_for_scoring(hypotheses[i], options);
        const auto r = tokens_for_scoring(references[i], options);
        r1 += metrics::rouge_n(h, r, 1).f1;
        r2 += metrics::rouge_n(h, r, 2).f1;
        rl += metrics::rouge_l(h, r).f1;
      }
      scores["Rouge1"] = 100.0 * r1 / n;
      scores["Rouge2"] = 100.0 * r2 / n;
      scores["RougeL"] = 100.0 * rl / n;
      break;
    }
    case Task::kClassification: {
      std::vector<metrics::LabelPair> pairs;
      for (std::size_t i = 0; i < hypotheses.size(); ++i) pairs.emplace_back(trim(hypotheses[i]), trim(references[i]));
      scores["acc"] = 100.0 * metrics::accuracy(pairs);
      scores["macro_f1"] = 100.0 * metrics::macro_f1(pairs);
      break;
    }
    case Task::kQa: {
      double em = 0, f1 = 0;
      for (std::size_t i = 0; i < hypotheses.size(); ++i) {
        em += metrics::exact_match(hypotheses[i], references[i]) ? 1.0 : 0.0;
        f1 += metrics::qa_token_f1(hypotheses[i], references[i]);
      }
      scores["em"] = 100.0 * em / n;
      scores["f1"] = 100.0 * f1 / n;
      break;
    }
    default: {
      metrics::BleuStats stats;
      for (std::size_t i = 0; i < hypotheses.size(); ++i)
        stats += metrics::bleu_stats(tokens_for_scoring(hypotheses[i], options),
                                     tokens_for_scoring(references[i], options));
      scores["bleu"] = metrics::bleu_from_stats(stats).score;
      break;
    }
  }
  return scores;
}

std::string EvalRun::to_json() const {
  nlohmann::ordered_json doc;
  doc["model"] = model_id;
  doc["dataset"] = dataset_id;
  doc["split"] = split;
  if (!hypotheses_path.empty()) doc["hypotheses"] = hypotheses_path;
  doc["scores"] = scores;
  doc["timestamp"] = timestamp;
  return doc.dump();
}

EvalRun EvalRun::from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    EvalRun run;
    run.model_id = doc.at("model").get<std::string>();
    run.dataset_id = doc.at("dataset").get<std::string>();
    run.split = doc.at("split").get<std::string>();
    run.hypotheses_path = doc.value("hypotheses", std::string());
    run.scores = doc.value("scores", Scores{});
    run.timestamp = doc.value("timestamp", std::string());
    return run;
  } catch (const json::exception& e) {
    throw DataError(std::string("run record: ") + e.what());
  }
}

bool is_test_split(std::string_view split) { return split == "test" || split.starts_with("test_"); }

Scores evaluate_run(EvalRun& run, const LoadedDataset& dataset, const EvalOptions& options, const fs::path& data_dir) {
  auto it = dataset.splits.find(run.split);
  if (it == dataset.splits.end())
    throw DataError("dataset '" + dataset.spec.id + "' has no loaded split '" + run.split + "'");
  if (run.hypotheses.empty() && !run.hypotheses_path.empty())
    run.hypotheses = read_lines(resolve(run.hypotheses_path, data_dir));

  const auto& ref_field = reference_field(dataset.spec.task);
  std::vector<std::string> refs;
  refs.reserve(it->second.size());
  for (const auto& r : it->second) refs.push_back(r.at(ref_field));
  if (run.hypotheses.size() != refs.size())
    throw DataError(run.model_id + " on " + dataset.spec.id + "/" + run.split + ": " +
                    std::to_string(run.hypotheses.size()) + " hypotheses for " + std::to_string(refs.size()) +
                    " references");

  run.dataset_id = dataset.spec.id;
  run.scores = score_task(dataset.spec.task, run.hypotheses, refs, options);
  if (run.timestamp.empty()) run.timestamp = utc_timestamp();
  return run.scores;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunStore::RunStore(fs::path file) : file_(std::move(file)) {
  if (!fs::exists(file_)) return;
  for (const auto& line : read_lines(file_))
    if (!line.empty()) runs_.push_back(EvalRun::from_json(line));
}

bool RunStore::has_test_run(const std::string& model, const std::string& dataset, const std::string& split) const {
  if (!is_test_split(split)) return false;
  for (const auto& r : runs_)
    if (r.model_id == model && r.dataset_id == dataset && r.split == split) return true;
  return false;
}

void RunStore::record(EvalRun run, bool force) {
  if (has_test_run(run.model_id, run.dataset_id, run.split)) {
    if (!force)
      throw DuplicateTestEvaluation(run.model_id + " was already evaluated on " + run.dataset_id + "/" + run.split +
                                    "; select models on dev and pass --force to re-run a test split");
    std::erase_if(runs_, [&](const EvalRun& r) {
      return r.model_id == run.model_id && r.dataset_id == run.dataset_id && r.split == run.split;
    });
  }
  run.hypotheses.clear();
  runs_.push_back(std::move(run));
  save();
}

void RunStore::save() const {
  std::string content;
  for (const auto& r : runs_) content += r.to_json() + "\n";
  if (file_.has_parent_path()) fs::create_directories(file_.parent_path());
  write_file_atomic(file_, content);
}

void LengthBins::validate() const {
  if (boundaries.empty()) throw InvalidArgument("length bins need at least one boundary");
  for (std::size_t i = 1; i < boundaries.size(); ++i)
    if (boundaries[i] <= boundaries[i - 1]) throw InvalidArgument("length bin boundaries must strictly ascend");
}

std::size_t LengthBins::bin_of(std::size_t length) const {
  if (length < boundaries.front()) return 0;
  if (boundaries.size() == 1) return 1;
  if (length <= boundaries[1]) return 1;
  for (std::size_t i = 2; i < boundaries.size(); ++i)
    if (length <= boundaries[i]) return i;
  return boundaries.size();
}

std::string LengthBins::label(std::size_t bin) const {
  const auto s = [](std::size_t v) { return std::to_string(v); };
  if (bin == 0) return "<" + s(boundaries.front());
  if (boundaries.size() == 1) return ">=" + s(boundaries.front());
  if (bin == boundaries.size()) return ">" + s(boundaries.back());
  if (bin == 1) return s(boundaries[0]) + "-" + s(boundaries[1]);
  return s(boundaries[bin - 1] + 1) + "-" + s(boundaries[bin]);
}

std::vector<BinResult> length_binned(const std::vector<Triple>& triples, const LengthBins& bins, Task task,
                                     const EvalOptions& options) {
  bins.validate();
  std::vector<std::vector<std::string>> hyps(bins.count()), refs(bins.count());
  for (const auto& t : triples) {
    const std::size_t b = bins.bin_of(utf8::split_whitespace_views(t.source).size());
    hyps[b].push_back(t.hypothesis);
    refs[b].push_back(t.reference);
  }
  std::vector<BinResult> out;
  for (std::size_t b = 0; b < bins.count(); ++b) {
    BinResult r;
    r.label = bins.label(b);
    r.count = hyps[b].size();
    if (r.count > 0) r.scores = score_task(task, hyps[b], refs[b], options);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace argenkit::harness

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "argenkit/error.hpp"
#include "argenkit/normalize.hpp"
#include "argenkit/rng.hpp"

namespace argenkit::harness {

// ---------------------------------------------------------------------------
// Tasks

enum class Task { kMt, kCst, kSummarization, kNtg, kQg, kTransliteration, kParaphrase, kClassification, kQa };

std::string_view task_name(Task task);
// Accepts canonical names and the short CLI aliases (tr, pph, cls, summ).
Task parse_task(std::string_view name);

// Record fields, in TSV column order. The last field is the reference.
const std::vector<std::string>& task_fields(Task task);
const std::string& reference_field(Task task);
// bleu | Rouge1 Rouge2 RougeL | acc macro_f1 | em f1
std::vector<std::string> metric_set(Task task);

using Record = std::map<std::string, std::string>;

// ---------------------------------------------------------------------------
// Registry

enum class Format { kTsvParallel, kJsonl };

struct SplitSource {
  // Either a single file (TSV with one column per task field, or JSONL), or
  // one line-aligned file per field.
  std::string path;
  std::map<std::string, std::string> files;
  std::optional<std::size_t> declared_size;
  std::string group;  // overrides DatasetSpec::group for this split
};

struct DatasetSpec {
  std::string id;
  Task task = Task::kMt;
  Format format = Format::kTsvParallel;
  std::map<std::string, SplitSource> splits;
  std::optional<std::string> language_pair;  // e.g. "ar-en"
  std::string group;                         // report grouping, e.g. MSA or DIA

  std::vector<std::string> metrics() const { return metric_set(task); }
  std::string group_of(const std::string& split) const;

  void validate() const;
  std::string to_json() const;
  static DatasetSpec from_json(std::string_view json);
  static DatasetSpec load(const std::filesystem::path& file);
};

bool is_valid_split_name(std::string_view name);

// Every *.json document in `dir`, sorted by id.
std::vector<DatasetSpec> load_registry(const std::filesystem::path& dir);
const DatasetSpec& find_dataset(const std::vector<DatasetSpec>& registry, std::string_view id);
// Writes <dir>/<id>.json through a temporary file and rename.
void save_spec(const DatasetSpec& spec, const std::filesystem::path& dir);

void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// $ARGENKIT_DATA_DIR, or the current directory.
std::filesystem::path data_dir_from_env();
std::filesystem::path resolve(const std::filesystem::path& path, const std::filesystem::path& data_dir);

// UTF-8 lines of a file: BOM stripped, CR/LF handled, final newline
// optional. Throws DataError naming the line on invalid UTF-8.
std::vector<std::string> read_lines(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Loading

struct LoadedDataset {
  DatasetSpec spec;
  std::map<std::string, std::vector<Record>> splits;

  std::size_t size(const std::string& split) const;
  // Splits whose record count differs from the declared size.
  std::vector<std::string> size_mismatches() const;
};

std::vector<Record> load_split(const DatasetSpec& spec, const std::string& split,
                               const std::filesystem::path& data_dir);
LoadedDataset load_dataset(const DatasetSpec& spec, const std::filesystem::path& data_dir);

// Records whose `field` has at least k whitespace words.
std::vector<Record> min_words_filter(const std::vector<Record>& records, std::size_t k, const std::string& field);

// ---------------------------------------------------------------------------
// Scoring

struct EvalOptions {
  // Hypotheses and references are normalized before whitespace tokenization.
  bool normalize = true;
  text::NormalizationConfig normalization{};
};

// metric -> value on a 0..100 scale
using Scores = std::map<std::string, double>;

Scores score_task(Task task, const std::vector<std::string>& hypotheses, const std::vector<std::string>& references,
                  const EvalOptions& options = {});

struct EvalRun {
  std::string model_id;
  std::string dataset_id;
  std::string split;
  std::string hypotheses_path;
  std::vector<std::string> hypotheses;  // loaded from hypotheses_path when empty
  Scores scores;
  std::string timestamp;

  std::string to_json() const;  // one line, without the hypotheses
  static EvalRun from_json(std::string_view json);
};

bool is_test_split(std::string_view split);

// Scores the run against the split's references and stores the result in
// run.scores. Throws DataError when the counts differ.
Scores evaluate_run(EvalRun& run, const LoadedDataset& dataset, const EvalOptions& options = {},
                    const std::filesystem::path& data_dir = {});

class DuplicateTestEvaluation : public Error {
 public:
  using Error::Error;
};

// JSONL store of completed runs. A model may be scored on dev splits any
// number of times but on each test split only once unless forced.
class RunStore {
 public:
  explicit RunStore(std::filesystem::path file);

  const std::vector<EvalRun>& runs() const { return runs_; }
  bool has_test_run(const std::string& model, const std::string& dataset, const std::string& split) const;
  // Appends and saves. Throws DuplicateTestEvaluation on a repeated test run
  // unless force is set, in which case the old entry is replaced.
  void record(EvalRun run, bool force = false);

 private:
  void save() const;

  std::filesystem::path file_;
  std::vector<EvalRun> runs_;
};

std::string utc_timestamp();

// ---------------------------------------------------------------------------
// Length bins

// Cut points b1 < b2 < ... < bk. With the default {10, 20} the bins are
// length < 10, 10 <= length <= 20 and length > 20. In general the first bin
// is [0, b1), the second [b1, b2], each later bin (b_i, b_i+1], and the last
// (bk, inf); a single cut point gives [0, b1) and [b1, inf).
struct LengthBins {
  std::vector<std::size_t> boundaries{10, 20};

  void validate() const;
  std::size_t count() const { return boundaries.size() + 1; }
  std::size_t bin_of(std::size_t length) const;
  std::string label(std::size_t bin) const;
};

struct Triple {
  std::string source;
  std::string reference;
  std::string hypothesis;
};

struct BinResult {
  std::string label;
  std::size_t count = 0;
  Scores scores;  // empty for an empty bin
};

// Assigns triples by whitespace token count of the source and scores each
// bin with the task's metric set.
std::vector<BinResult> length_binned(const std::vector<Triple>& triples, const LengthBins& bins, Task task,
                                     const EvalOptions& options = {});

// ---------------------------------------------------------------------------
// Task formatting and multitask mixing

std::string task_prefix(Task task, const std::optional<std::string>& language_pair = std::nullopt);

// (input with task prefix, target). QG inputs are
// "<prefix><passage> answer: <answer>". Throws DataError on a missing field.
std::pair<std::string, std::string> format_task(Task task, const Record& fields,
                                                const std::optional<std::string>& language_pair = std::nullopt);

struct TaskStream {
  std::string task;
  double proportion = 0.0;
  std::vector<std::pair<std::string, std::string>> examples;  // (input, target)
};

struct TaggedExample {
  std::string task;
  std::size_t index;  // position in the source stream
  std::string input;
  std::string target;
};

// Each draw picks a stream with probability equal to its proportion (with
// replacement) and emits that stream's next example, cycling when exhausted.
class Mixer {
 public:
  // Throws InvalidArgument unless proportions sum to 1 within 1e-9 and
  // every stream with positive proportion is non-empty.
  Mixer(std::vector<TaskStream> streams, std::uint64_t seed);
  TaggedExample next();

 private:
  std::vector<TaskStream> streams_;
  std::vector<double> cumulative_;
  std::vector<std::size_t> cursor_;
  Rng rng_;
};

std::vector<TaggedExample> mix(std::vector<TaskStream> streams, std::size_t count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Reports

struct ReportRow {
  std::string label;  // "dataset/split" or "Average <group>"
  std::string group;
  std::vector<std::optional<double>> cells;  // one per model, rounded to 2 decimals
  std::vector<bool> best;
};

struct ReportTable {
  std::string metric;
  std::vector<std::string> models;
  std::vector<ReportRow> rows;
  std::vector<ReportRow> averages;
};

// One table per metric key. `groups` maps "dataset/split" or "dataset" to a
// group name; when any row has a group, per-group and overall averages of
// the displayed cells are appended.
std::vector<ReportTable> build_report(const std::vector<EvalRun>& runs,
                                      const std::map<std::string, std::string>& groups = {});
std::map<std::string, std::string> groups_from_registry(const std::vector<DatasetSpec>& registry);

std::string render_markdown(const std::vector<ReportTable>& tables);
std::string render_csv(const std::vector<ReportTable>& tables);

}  // namespace argenkit::harness

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "argenkit/harness.hpp"
#include "argenkit/utf8.hpp"
#include "json.hpp"

namespace argenkit::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TaskInfo {
  Task task;
  std::string_view name;
  std::vector<std::string_view> aliases;
  std::vector<std::string> fields;
};

const std::vector<TaskInfo>& task_table() {
  static const std::vector<TaskInfo> table{
      {Task::kMt, "mt", {}, {"source", "target"}},
      {Task::kCst, "cst", {}, {"source", "target"}},
      {Task::kSummarization, "summarization", {"summ"}, {"source", "target"}},
      {Task::kNtg, "ntg", {}, {"source", "target"}},
      {Task::kQg, "qg", {}, {"passage", "answer", "question"}},
      {Task::kTransliteration, "transliteration", {"tr"}, {"source", "target"}},
      {Task::kParaphrase, "paraphrase", {"pph"}, {"source", "target"}},
      {Task::kClassification, "classification", {"cls"}, {"text", "label"}},
      {Task::kQa, "qa", {}, {"question", "context", "answer"}},
  };
  return table;
}

const TaskInfo& info(Task task) {
  for (const auto& t : task_table())
    if (t.task == task) return t;
  throw InvalidArgument("unknown task");
}

std::string format_name(Format f) { return f == Format::kJsonl ? "jsonl" : "tsv-parallel"; }

Format parse_format(const std::string& name) {
  if (name == "jsonl") return Format::kJsonl;
  if (name == "tsv-parallel" || name == "tsv") return Format::kTsvParallel;
  throw DataError("unknown dataset format '" + name + "'");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    out.emplace_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) return out;
    start = tab + 1;
  }
}

}  // namespace

std::string_view task_name(Task task) { return info(task).name; }

Task parse_task(std::string_view name) {
  for (const auto& t : task_table()) {
    if (t.name == name) return t.task;
    for (auto alias : t.aliases)
      if (alias == name) return t.task;
  }
  throw InvalidArgument("unknown task '" + std::string(name) + "'");
}

const std::vector<std::string>& task_fields(Task task) { return info(task).fields; }

const std::string& reference_field(Task task) { return info(task).fields.back(); }

std::vector<std::string> metric_set(Task task) {
  switch (task) {
    case Task::kSummarization: return {"Rouge1", "Rouge2", "RougeL"};
    case Task::kClassification: return {"acc", "macro_f1"};
    case Task::kQa: return {"em", "f1"};
    default: return {"bleu"};
  }
}

bool is_valid_split_name(std::string_view name) {
  return name == "train" || name == "dev" || name == "test" || (name.starts_with("test_") && name.size() > 5);
}

std::string DatasetSpec::group_of(const std::string& split) const {
  auto it = splits.find(split);
  if (it != splits.end() && !it->second.group.empty()) return it->second.group;
  return group;
}

void DatasetSpec::validate() const {
  if (id.empty()) throw DataError("dataset spec without an id");
  if (splits.empty()) throw DataError("dataset '" + id + "' declares no splits");
  const auto& fields = task_fields(task);
  for (const auto& [name, src] : splits) {
    if (!is_valid_split_name(name))
      throw DataError("dataset '" + id + "': invalid split name '" + name + "' (train, dev, test or test_*)");
    if (src.path.empty() == src.files.empty())
      throw DataError("dataset '" + id + "' split '" + name + "': give exactly one of 'path' or 'files'");
    if (!src.files.empty()) {
      if (format != Format::kTsvParallel)
        throw DataError("dataset '" + id + "' split '" + name + "': per-field files need tsv-parallel format");
      for (const auto& f : fields)
        if (!src.files.count(f))
          throw DataError("dataset '" + id + "' split '" + name + "': no file for field '" + f + "'");
      for (const auto& [f, path] : src.files)
        if (std::find(fields.begin(), fields.end(), f) == fields.end())
          throw DataError("dataset '" + id + "' split '" + name + "': unknown field '" + f + "'");
    }
  }
}

std::string DatasetSpec::to_json() const {
  nlohmann::ordered_json doc;
  doc["id"] = id;
  doc["task"] = std::string(task_name(task));
  doc["format"] = format_name(format);
  if (language_pair) doc["language_pair"] = *language_pair;
  if (!group.empty()) doc["group"] = group;
  nlohmann::ordered_json splits_doc = nlohmann::ordered_json::object();
  for (const auto& [name, src] : splits) {
    nlohmann::ordered_json s;
    if (!src.path.empty()) s["path"] = src.path;
    if (!src.files.empty()) s["files"] = src.files;
    if (src.declared_size) s["declared_size"] = *src.declared_size;
    if (!src.group.empty()) s["group"] = src.group;
    splits_doc[name] = std::move(s);
  }
  doc["splits"] = std::move(splits_doc);
  doc["metrics"] = metric_set(task);
  return doc.dump(2);
}

DatasetSpec DatasetSpec::from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    static const std::vector<std::string> known{"id", "task", "format", "language_pair", "group", "splits", "metrics"};
    for (const auto& [key, value] : doc.items())
      if (std::find(known.begin(), known.end(), key) == known.end())
        throw DataError("dataset spec: unknown key '" + key + "'");

    DatasetSpec spec;
    spec.id = doc.at("id").get<std::string>();
    try {
      spec.task = parse_task(doc.at("task").get<std::string>());
    } catch (const InvalidArgument& e) {
      throw DataError(std::string("dataset spec: ") + e.what());
    }
    spec.format = parse_format(doc.value("format", std::string("tsv-parallel")));
    if (doc.contains("language_pair")) spec.language_pair = doc["language_pair"].get<std::string>();
    spec.group = doc.value("group", std::string());
    for (const auto& [name, s] : doc.at("splits").items()) {
      SplitSource src;
      src.path = s.value("path", std::string());
      if (s.contains("files")) src.files = s["files"].get<std::map<std::string, std::string>>();
      if (s.contains("declared_size")) src.declared_size = s["declared_size"].get<std::size_t>();
      src.group = s.value("group", std::string());
      spec.splits.emplace(name, std::move(src));
    }
    if (doc.contains("metrics") && doc["metrics"].get<std::vector<std::string>>() != metric_set(spec.task))
      throw DataError("dataset '" + spec.id + "': metric set does not match task " +
                      std::string(task_name(spec.task)));
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw DataError(std::string("dataset spec: ") + e.what());
  }
}

DatasetSpec DatasetSpec::load(const fs::path& file) {
  try {
    return from_json(read_file(file));
  } catch (const DataError& e) {
    throw DataError(file.string() + ": " + e.what());
  }
}

std::vector<DatasetSpec> load_registry(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError("registry directory not found: " + dir.string());
  std::vector<DatasetSpec> out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(DatasetSpec::load(entry.path()));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].id == out[i - 1].id) throw DataError("registry: duplicate dataset id '" + out[i].id + "'");
  return out;
}

const DatasetSpec& find_dataset(const std::vector<DatasetSpec>& registry, std::string_view id) {
  for (const auto& spec : registry)
    if (spec.id == id) return spec;
  throw DataError("dataset '" + std::string(id) + "' is not in the registry");
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw DataError("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw DataError("cannot replace " + path.string() + ": " + ec.message());
}

void save_spec(const DatasetSpec& spec, const fs::path& dir) {
  spec.validate();
  fs::create_directories(dir);
  write_file_atomic(dir / (spec.id + ".json"), spec.to_json() + "\n");
}

fs::path data_dir_from_env() {
  if (const char* dir = std::getenv("ARGENKIT_DATA_DIR"); dir && *dir) return dir;
  return fs::current_path();
}

fs::path resolve(const fs::path& path, const fs::path& data_dir) {
  if (path.is_absolute() || data_dir.empty()) return path;
  return data_dir / path;
}

std::vector<std::string> read_lines(const fs::path& path) {
  const std::string content = read_file(path);
  std::string_view rest = utf8::strip_bom(content);
  std::vector<std::string> lines;
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!utf8::is_valid(line))
      throw DataError(path.string() + ":" + std::to_string(lines.size() + 1) + ": invalid UTF-8");
    lines.emplace_back(line);
  }
  return lines;
}

std::size_t LoadedDataset::size(const std::string& split) const {
  auto it = splits.find(split);
  return it == splits.end() ? 0 : it->second.size();
}

std::vector<std::string> LoadedDataset::size_mismatches() const {
  std::vector<std::string> out;
  for (const auto& [name, src] : spec.splits) {
    if (src.declared_size && splits.count(name) && *src.declared_size != size(name))
      out.push_back(spec.id + "/" + name + ": declared " + std::to_string(*src.declared_size) + " records, found " +
                    std::to_string(size(name)));
  }
  return out;
}

std::vector<Record> load_split(const DatasetSpec& spec, const std::string& split, const fs::path& data_dir) {
  auto it = spec.splits.find(split);
  if (it == spec.splits.end()) throw DataError("dataset '" + spec.id + "' has no split '" + split + "'");
  const SplitSource& src = it->second;
  const auto& fields = task_fields(spec.task);
  std::vector<Record> records;

  if (!src.files.empty()) {
    std::vector<std::vector<std::string>> columns;
    for (const auto& f : fields) columns.push_back(read_lines(resolve(src.files.at(f), data_dir)));
    const std::size_t n = columns.front().size();
    for (std::size_t c = 1; c < columns.size(); ++c) {
      if (columns[c].size() != n) {
        const std::size_t line = std::min(n, columns[c].size()) + 1;
        throw DataError("dataset '" + spec.id + "' split '" + split + "': parallel files are ragged at line " +
                        std::to_string(line) + " (" + fields.front() + " has " + std::to_string(n) + " lines, " +
                        fields[c] + " has " + std::to_string(columns[c].size()) + ")");
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      Record r;
      for (std::size_t c = 0; c < fields.size(); ++c) r[fields[c]] = columns[c][i];
      records.push_back(std::move(r));
    }
    return records;
  }

  const fs::path path = resolve(src.path, data_dir);
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    Record r;
    if (spec.format == Format::kTsvParallel) {
      const auto cols = split_tabs(lines[i]);
      if (cols.size() != fields.size())
        throw DataError(where + ": ragged row, expected " + std::to_string(fields.size()) + " columns, found " +
                        std::to_string(cols.size()));
      for (std::size_t c = 0; c < fields.size(); ++c) r[fields[c]] = cols[c];
    } else {
      if (lines[i].empty()) continue;
      try {
        const json obj = json::parse(lines[i]);
        for (const auto& f : fields) r[f] = obj.at(f).get<std::string>();
      } catch (const json::exception& e) {
        throw DataError(where + ": " + e.what());
      }
    }
    records.push_back(std::move(r));
  }
  return records;
}

LoadedDataset load_dataset(const DatasetSpec& spec, const fs::path& data_dir) {
  spec.validate();
  LoadedDataset out{spec, {}};
  for (const auto& [name, src] : spec.splits) out.splits.emplace(name, load_split(spec, name, data_dir));
  return out;
}

std::vector<Record> min_words_filter(const std::vector<Record>& records, std::size_t k, const std::string& field) {
  std::vector<Record> out;
  for (const auto& r : records) {
    auto it = r.find(field);
    if (it == r.end()) throw DataError("record has no field '" + field + "'");
    if (utf8::split_whitespace_views(it->second).size() >= k) out.push_back(r);
  }
  return out;
}

}  // namespace argenkit::harness

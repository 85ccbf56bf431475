#include <cmath>

#include "argenkit/harness.hpp"

namespace argenkit::harness {

namespace {

const std::string& field(const Record& r, const std::string& name, Task task) {
  auto it = r.find(name);
  if (it == r.end())
    throw DataError(std::string(task_name(task)) + " example is missing field '" + name + "'");
  return it->second;
}

}  // namespace

std::string task_prefix(Task task, const std::optional<std::string>& language_pair) {
  switch (task) {
    case Task::kMt:
    case Task::kCst:
      return language_pair ? "translate " + *language_pair + ": " : "translate: ";
    case Task::kSummarization: return "summarize: ";
    case Task::kNtg: return "generate title: ";
    case Task::kQg: return "generate question: ";
    case Task::kTransliteration: return "transliterate: ";
    case Task::kParaphrase: return "paraphrase: ";
    case Task::kClassification: return "classify: ";
    case Task::kQa: return "answer question: ";
  }
  return {};
}

std::pair<std::string, std::string> format_task(Task task, const Record& fields,
                                                const std::optional<std::string>& language_pair) {
  const std::string prefix = task_prefix(task, language_pair);
  const std::string& target = field(fields, reference_field(task), task);
  switch (task) {
    case Task::kQg:
      return {prefix + field(fields, "passage", task) + " answer: " + field(fields, "answer", task), target};
    case Task::kQa:
      return {prefix + field(fields, "question", task) + " context: " + field(fields, "context", task), target};
    default:
      return {prefix + field(fields, task_fields(task).front(), task), target};
  }
}

Mixer::Mixer(std::vector<TaskStream> streams, std::uint64_t seed) : streams_(std::move(streams)), rng_(seed) {
  if (streams_.empty()) throw InvalidArgument("mixing needs at least one stream");
  double sum = 0.0;
  for (const auto& s : streams_) {
    if (!(s.proportion >= 0.0)) throw InvalidArgument("stream '" + s.task + "' has a negative proportion");
    if (s.proportion > 0.0 && s.examples.empty())
      throw InvalidArgument("stream '" + s.task + "' has a positive proportion but no examples");
    sum += s.proportion;
    cumulative_.push_back(sum);
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw InvalidArgument("stream proportions must sum to 1, got " + std::to_string(sum));
  cursor_.assign(streams_.size(), 0);
}

TaggedExample Mixer::next() {
  const double u = rng_.uniform01() * cumulative_.back();
  std::size_t pick = 0;
  while (pick + 1 < streams_.size() && (u >= cumulative_[pick] || streams_[pick].proportion == 0.0)) ++pick;
  // Rounding can leave u above the last cumulative sum; fall back to the
  // last stream with positive weight.
  while (streams_[pick].proportion == 0.0) --pick;

  auto& stream = streams_[pick];
  const std::size_t index = cursor_[pick]++ % stream.examples.size();
  const auto& [input, target] = stream.examples[index];
  return {stream.task, index, input, target};
}

std::vector<TaggedExample> mix(std::vector<TaskStream> streams, std::size_t count, std::uint64_t seed) {
  Mixer mixer(std::move(streams), seed);
  std::vector<TaggedExample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(mixer.next());
  return out;
}

}  // namespace argenkit::harness

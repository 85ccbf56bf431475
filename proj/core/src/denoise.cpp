#include "argenkit/denoise.hpp"

#include "argenkit/error.hpp"
#include "argenkit/tokenizer.hpp"

namespace argenkit::denoise {

void CorruptionConfig::validate() const {
  if (!(drop_rate >= 0.0 && drop_rate <= 1.0))
    throw InvalidArgument("drop_rate must lie in [0, 1], got " + std::to_string(drop_rate));
  if (max_sentinels < 1) throw InvalidArgument("max_sentinels must be >= 1");
}

CorruptedExample corrupt_with_mask(const Tokens& tokens, const std::vector<bool>& dropped,
                                   std::size_t max_sentinels) {
  if (tokens.empty()) throw InvalidArgument("cannot corrupt an empty token sequence");
  if (dropped.size() != tokens.size()) throw InvalidArgument("drop mask length differs from token count");
  for (const auto& t : tokens)
    if (tok::sentinel_index(t) >= 0)
      throw InvalidArgument("input already contains sentinel token " + t);

  CorruptedExample ex;
  ex.dropped_mask = dropped;
  std::size_t spans = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!dropped[i]) {
      ex.input_tokens.push_back(tokens[i]);
      continue;
    }
    if (i == 0 || !dropped[i - 1]) {
      if (spans == max_sentinels)
        throw Error("span count exceeds max_sentinels (" + std::to_string(max_sentinels) + ")");
      ex.input_tokens.push_back(tok::sentinel(spans));
      ex.target_tokens.push_back(tok::sentinel(spans));
      ++spans;
    }
    ex.target_tokens.push_back(tokens[i]);
  }
  ex.target_tokens.push_back(tok::sentinel(spans));
  return ex;
}

CorruptedExample corrupt(const Tokens& tokens, const CorruptionConfig& config, Rng& rng) {
  config.validate();
  std::vector<bool> dropped(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) dropped[i] = rng.bernoulli(config.drop_rate);
  return corrupt_with_mask(tokens, dropped, config.max_sentinels);
}

CorruptedExample corrupt(const Tokens& tokens, const CorruptionConfig& config, std::uint64_t index) {
  Rng rng = Rng::for_example(config.seed, index);
  return corrupt(tokens, config, rng);
}

Tokens reconstruct(const CorruptedExample& example) {
  const auto& target = example.target_tokens;
  if (target.empty() || tok::sentinel_index(target.front()) != 0)
    throw DataError("target must start with <extra_id_0>");

  // Spans in the target, in order of sentinel index.
  std::vector<Tokens> spans;
  long expected = 0;
  for (const auto& t : target) {
    const long idx = tok::sentinel_index(t);
    if (idx < 0) {
      spans.back().push_back(t);
      continue;
    }
    if (idx != expected)
      throw DataError("target sentinel " + t + " out of order (expected " + tok::sentinel(expected) + ")");
    spans.emplace_back();
    ++expected;
  }
  if (!spans.back().empty()) throw DataError("target does not end with a terminal sentinel");
  spans.pop_back();

  Tokens out;
  std::size_t next_span = 0;
  for (const auto& t : example.input_tokens) {
    const long idx = tok::sentinel_index(t);
    if (idx < 0) {
      out.push_back(t);
      continue;
    }
    if (static_cast<std::size_t>(idx) != next_span || next_span >= spans.size())
      throw DataError("input sentinel " + t + " has no matching target span");
    if (spans[next_span].empty()) throw DataError("target span for " + t + " is empty");
    out.insert(out.end(), spans[next_span].begin(), spans[next_span].end());
    ++next_span;
  }
  if (next_span != spans.size())
    throw DataError("target has " + std::to_string(spans.size()) + " spans but input has " +
                    std::to_string(next_span) + " sentinels");
  return out;
}

}  // namespace argenkit::denoise

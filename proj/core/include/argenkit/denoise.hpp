#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "argenkit/rng.hpp"

namespace argenkit::denoise {

using Tokens = std::vector<std::string>;

struct CorruptionConfig {
  double drop_rate = 0.15;
  std::uint64_t seed = 0;
  // Spans allowed per example. The terminal target sentinel takes index
  // span_count, so 99 spans fit a vocabulary with 100 sentinels.
  std::size_t max_sentinels = 99;

  void validate() const;
};

struct CorruptedExample {
  Tokens input_tokens;
  Tokens target_tokens;
  std::vector<bool> dropped_mask;  // aligned to the original sequence
};

// Drops each token independently with probability drop_rate, merges runs of
// dropped tokens into spans, and replaces span i in the input by
// <extra_id_i>. The target lists <extra_id_i> followed by span i's tokens for
// every span, then one terminal sentinel.
//
// Throws InvalidArgument on empty input or input that already contains a
// sentinel literal, and Error when the span count exceeds max_sentinels.
CorruptedExample corrupt(const Tokens& tokens, const CorruptionConfig& config, Rng& rng);

// Same, with the stream derived from (config.seed, index).
CorruptedExample corrupt(const Tokens& tokens, const CorruptionConfig& config, std::uint64_t index);

// Builds the example for an explicit drop pattern.
CorruptedExample corrupt_with_mask(const Tokens& tokens, const std::vector<bool>& dropped,
                                   std::size_t max_sentinels = 99);

// Inverse of corrupt. Throws DataError when the input and target sentinels
// disagree.
Tokens reconstruct(const CorruptedExample& example);

}  // namespace argenkit::denoise

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "argenkit/denoise.hpp"
#include "argenkit/metrics.hpp"
#include "argenkit/normalize.hpp"
#include "argenkit/rng.hpp"
#include "argenkit/tokenizer.hpp"

using namespace argenkit;

namespace {

const char* kWords[] = {"كتب", "الولد", "رسالة", "إلى", "صديقه", "في", "المدينة", "hello", "ههههه", "😂😂😂"};

std::string sentence(Rng& rng, std::size_t words) {
  std::string s;
  for (std::size_t i = 0; i < words; ++i) {
    if (i) s += ' ';
    s += kWords[rng.uniform_int(0, 9)];
  }
  return s;
}

std::vector<std::string> tokens(Rng& rng, std::size_t n) {
  std::vector<std::string> t;
  for (std::size_t i = 0; i < n; ++i) t.push_back(kWords[rng.uniform_int(0, 9)]);
  return t;
}

void BM_CorpusBleu(benchmark::State& state) {
  Rng rng(1);
  std::vector<metrics::Tokens> hyps, refs;
  for (int i = 0; i < state.range(0); ++i) {
    hyps.push_back(tokens(rng, 25));
    refs.push_back(tokens(rng, 25));
  }
  for (auto _ : state) benchmark::DoNotOptimize(metrics::bleu(hyps, refs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CorpusBleu)->Arg(100)->Arg(1000);

void BM_Normalize(benchmark::State& state) {
  Rng rng(2);
  const std::string s = "@user <b>" + sentence(rng, 30) + "</b> https://t.co/x #وسم";
  for (auto _ : state) benchmark::DoNotOptimize(text::normalize(s));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(s.size()));
}
BENCHMARK(BM_Normalize);

void BM_Encode(benchmark::State& state) {
  Rng rng(3);
  std::vector<std::string> corpus;
  for (int i = 0; i < 500; ++i) corpus.push_back(sentence(rng, 20));
  const auto model = tok::train(corpus, tok::default_specials().size() + 256 + 300);
  const std::string s = sentence(rng, 50);
  for (auto _ : state) benchmark::DoNotOptimize(model.encode(s));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(s.size()));
}
BENCHMARK(BM_Encode);

void BM_Train(benchmark::State& state) {
  Rng rng(4);
  std::vector<std::string> corpus;
  for (int i = 0; i < 2000; ++i) corpus.push_back(sentence(rng, 20));
  for (auto _ : state) benchmark::DoNotOptimize(tok::train(corpus, tok::default_specials().size() + 256 + 500));
}
BENCHMARK(BM_Train)->Unit(benchmark::kMillisecond);

void BM_Corrupt(benchmark::State& state) {
  Rng rng(5);
  const auto t = tokens(rng, 512);
  denoise::CorruptionConfig cfg;
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(denoise::corrupt(t, cfg, i++));
}
BENCHMARK(BM_Corrupt);

}  // namespace
BENCHMARK_MAIN();

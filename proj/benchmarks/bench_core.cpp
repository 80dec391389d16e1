#include <benchmark/benchmark.h>

#include "pfvc/entropy.hpp"
#include "pfvc/harness.hpp"
#include "pfvc/motion_synthesis.hpp"
#include "pfvc/rng.hpp"
#include "pfvc/tokenizer.hpp"

namespace {

using namespace pfvc;

void BM_Tokenize(benchmark::State& state) {
  const Sequence seq = synth_sequence(SynthKind::kTranslatingTexture, 1, 256, 256, 1);
  const MotionFeature f = frame_to_feature(seq[0]);
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(f, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Tokenize)->Arg(16)->Arg(256);

void BM_EncodeSymbols(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  CounterRng rng(2);
  ResidualSymbols sym{g, {}};
  for (int i = 0; i < g; ++i) sym.symbols.push_back(static_cast<std::int32_t>(rng.next_below(21)) - 10);
  ContextSet cs;
  for (auto _ : state) benchmark::DoNotOptimize(encode_symbols(sym, cs));
}
BENCHMARK(BM_EncodeSymbols)->Arg(16)->Arg(256);

void BM_ReconstructFrame(benchmark::State& state) {
  const Sequence seq = synth_sequence(SynthKind::kTranslatingTexture, 2, 256, 256, 3);
  const TokenVector kt = tokenize(frame_to_feature(seq[0]), 256);
  const KeyReference ref(seq[0], kt);
  const TokenVector it = tokenize(frame_to_feature(seq[1]), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_frame(ref, it));
}
BENCHMARK(BM_ReconstructFrame)->Arg(16)->Arg(256);

void BM_EncodeSequence(benchmark::State& state) {
  const Sequence seq = synth_sequence(SynthKind::kTranslatingTexture, 25, 256, 256, 4);
  EncodeConfig cfg;
  cfg.policy = FixedGranularity{144};
  for (auto _ : state) benchmark::DoNotOptimize(encode(seq, cfg));
  state.SetItemsProcessed(state.iterations() * 24);
}
BENCHMARK(BM_EncodeSequence)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

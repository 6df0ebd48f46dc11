// Copyright 2026 The segcap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "segcap/ngram_metrics.hpp"
#include "segcap/random.hpp"
#include "segcap/spice.hpp"
#include "segcap/units.hpp"

namespace {

using namespace segcap;

std::vector<EvalInstance> synthetic_corpus(int images, int caption_len, int vocab) {
  Rng rng(4242);
  std::vector<EvalInstance> out;
  auto seq = [&] {
    TokenSeq tokens;
    for (int i = 0; i < caption_len; ++i) {
      tokens.push_back("w" + std::to_string(rng.next_int(0, vocab - 1)));
    }
    return tokens;
  };
  for (int i = 0; i < images; ++i) {
    EvalInstance inst;
    inst.image_id = "img" + std::to_string(i);
    inst.candidate = seq();
    for (int r = 0; r < 5; ++r) inst.references.push_back(seq());
    out.push_back(std::move(inst));
  }
  return out;
}

void BM_Bleu4(benchmark::State& state) {
  auto corpus = synthetic_corpus(static_cast<int>(state.range(0)), 12, 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bleu4(corpus));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Bleu4)->Range(8, 512)->Complexity();

void BM_Cider(benchmark::State& state) {
  auto corpus = synthetic_corpus(static_cast<int>(state.range(0)), 12, 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cider(corpus));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Cider)->Range(8, 512)->Complexity();

void BM_RougeL(benchmark::State& state) {
  auto corpus = synthetic_corpus(static_cast<int>(state.range(0)), 12, 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rouge_l(corpus));
  }
}
BENCHMARK(BM_RougeL)->Range(8, 512);

void BM_MeteorExact(benchmark::State& state) {
  auto corpus = synthetic_corpus(static_cast<int>(state.range(0)), 12, 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(meteor_exact(corpus));
  }
}
BENCHMARK(BM_MeteorExact)->Range(8, 128);

void BM_RleEncode(benchmark::State& state) {
  Rng rng(7);
  FrameSeq frames;
  frames.frame_shift_ms = 40;
  for (long i = 0; i < state.range(0); ++i) frames.tokens.push_back(rng.next_int(0, 7));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rle_encode(frames, true));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RleEncode)->Range(1 << 8, 1 << 16);

void BM_MSpice(benchmark::State& state) {
  Rng rng(9);
  PropositionBag refs;
  for (int i = 0; i < 12; ++i) refs.insert(Proposition({"r" + std::to_string(i)}));
  std::vector<PropositionBag> candidates;
  for (long j = 0; j < state.range(0); ++j) {
    PropositionBag bag;
    for (int k = 0; k < 6; ++k) {
      bag.insert(Proposition({"r" + std::to_string(rng.next_int(0, 19))}));
    }
    candidates.push_back(std::move(bag));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(m_spice(refs, candidates));
  }
}
BENCHMARK(BM_MSpice)->Range(2, 64);

}  // namespace

BENCHMARK_MAIN();

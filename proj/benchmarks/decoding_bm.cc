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

#include "segcap/harness.hpp"
#include "segcap/ngram_model.hpp"

namespace {

using namespace segcap;

NgramModel fitted_model() {
  ToyGrammar grammar = default_toy_grammar();
  std::vector<GeneratedUtterance> corpus = generate_corpus(grammar, {}, 50, true, 11);
  std::vector<TrainingPair> pairs;
  for (const GeneratedUtterance& utt : corpus) {
    pairs.emplace_back(utt.context, units_to_tokens(rle_encode(utt.frames, false).tokens()));
  }
  return NgramModel::fit(pairs, 2, 0.05, 24);
}

void BM_BeamSearch(benchmark::State& state) {
  NgramModel model = fitted_model();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        beam_search(model, "scene_dog", static_cast<int>(state.range(0)), 1));
  }
}
BENCHMARK(BM_BeamSearch)->Arg(1)->Arg(3)->Arg(5)->Arg(8)->Arg(10);

void BM_SampleDecode(benchmark::State& state) {
  NgramModel model = fitted_model();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sample_decode(model, "scene_dog", 0.7, 5, static_cast<int>(state.range(0)), 17));
  }
}
BENCHMARK(BM_SampleDecode)->Arg(1)->Arg(5)->Arg(10);

void BM_GreedyDecode(benchmark::State& state) {
  NgramModel model = fitted_model();
  for (auto _ : state) {
    benchmark::DoNotOptimize(greedy_decode(model, "scene_dog"));
  }
}
BENCHMARK(BM_GreedyDecode);

void BM_CascadeExperiment(benchmark::State& state) {
  ToyGrammar grammar = default_toy_grammar();
  CascadeConfig config;
  config.n_per_context = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_cascade_experiment(grammar, {CascadeCondition::rle_clean}, config, 42));
  }
}
BENCHMARK(BM_CascadeExperiment)->Arg(10)->Arg(50);

}  // namespace

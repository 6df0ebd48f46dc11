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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "segcap/decoding.hpp"
#include "segcap/diversity.hpp"
#include "segcap/ngram_model.hpp"
#include "segcap/units.hpp"

namespace segcap {

// Desk-scale stand-in for the image/caption side of the cascade: scenes
// play the role of images, weighted word templates the role of captions,
// and a fixed word -> unit-n-gram lexicon the role of pronunciation.

struct CaptionTemplate {
  std::vector<std::string> words;
  double weight = 1.0;
};

struct SceneSpec {
  std::string id;
  std::vector<CaptionTemplate> templates;
};

/// Probability that a unit type is represented by several surrogate ids,
/// how many, and whether the surrogate choice is fixed per speaker or drawn
/// per frame occurrence.
struct CorruptionSpec {
  double split_prob = 0.0;
  int num_surrogates = 2;
  bool speaker_conditioned = false;
};

struct ToyGrammar {
  std::vector<SceneSpec> scenes;
  std::map<std::string, std::vector<int>> lexicon;  // word -> unit n-gram
  int duration_max = 4;                             // uniform [1, duration_max] frames per unit
  int frame_shift_ms = 40;
  std::vector<std::string> speakers{"spk0", "spk1"};
  CorruptionSpec corruption;  // applied only under corrupt conditions

  /// Checks that every template word is in the lexicon, weights are positive,
  /// the lexicon is prefix-free (so longest-match rendering is exact) and no
  /// template concatenation carries consecutive duplicate units (so the RLE
  /// projection is invertible). Throws InvalidGrammar otherwise.
  void validate() const;

  std::string to_json() const;
  static ToyGrammar from_json(const std::string& text);
};

/// Grammar used by the stock experiments and shipped under data/.
ToyGrammar default_toy_grammar();

/// Deterministic inverse of the generation step: longest-match segmentation
/// of a unit sequence back into words. Consecutive duplicate units are
/// collapsed first (the synthesis leg consumes run-length encoded units);
/// unsegmentable positions are skipped one unit at a time.
class LexiconRenderer {
 public:
  explicit LexiconRenderer(const ToyGrammar& grammar);

  struct Rendering {
    std::vector<std::string> words;
    std::size_t matched_units = 0;
    std::size_t skipped_units = 0;
  };

  Rendering render(const std::vector<int>& units) const;

 private:
  std::map<std::vector<int>, std::string> by_units_;
  std::size_t max_len_ = 0;
};

struct GeneratedUtterance {
  std::string context;
  std::string speaker;
  FrameSeq frames;
  std::vector<std::string> gold_words;
};

/// Samples n_per_context utterances per scene. With durations, every unit is
/// repeated for a uniform [1, duration_max] frame count; corruption maps
/// split unit types to surrogates per frame occurrence (or per speaker when
/// speaker_conditioned). Deterministic under (seed, scene, sample index).
std::vector<GeneratedUtterance> generate_corpus(const ToyGrammar& grammar,
                                                const CorruptionSpec& corruption,
                                                int n_per_context, bool with_durations,
                                                std::uint64_t seed);

enum class CascadeCondition { rle_clean, rle_corrupt, norle_clean };

const char* condition_name(CascadeCondition condition);
std::optional<CascadeCondition> condition_from_name(std::string_view name);

struct CascadeConfig {
  int n_per_context = 50;
  int order = 2;
  double alpha = 0.05;
  int beam_size = 5;
  double sample_temperature = 0.7;
  int sample_top_k = 5;
  int n_samples = 3;
  int max_len_rle = 24;
  int max_len_frames = 60;
};

struct MethodOutcome {
  std::string method;           // "beam" or "sample"
  double loop_rate = 0.0;       // fraction of decoded outputs flagged as looping
  double word_bleu4 = 0.0;      // rendered captions against template references
  double spice_f1 = 0.0;        // unigram-proposition F1, mean over outputs
  std::vector<std::string> contexts;  // scene id per decoded output
  std::vector<TokenSeq> rendered;     // word sequence per decoded output
};

struct ConditionOutcome {
  CascadeCondition condition = CascadeCondition::rle_clean;
  double mean_entropy = 0.0;  // fitted model's mean next-token entropy
  std::vector<MethodOutcome> methods;
  NgramModel model;
};

struct CascadeReport {
  std::vector<ConditionOutcome> conditions;

  const MethodOutcome& outcome(CascadeCondition condition, const std::string& method) const;
  std::vector<CurvePoint> to_points() const;
};

/// Full desk-scale cascade: generate unit corpora per condition, fit the
/// conditional n-gram captioner, decode with beam search and sampling, run
/// loop diagnostics, render units back to words and score against the
/// scene's templates. Bit-for-bit reproducible under a fixed seed.
CascadeReport run_cascade_experiment(const ToyGrammar& grammar,
                                     const std::vector<CascadeCondition>& conditions,
                                     const CascadeConfig& config, std::uint64_t seed);

}  // namespace segcap

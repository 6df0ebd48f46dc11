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
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "segcap/error.hpp"
#include "segcap/units.hpp"

namespace segcap {

/// Symbol inventory for sequence models. Index 0 is the reserved BOS and
/// index 1 the reserved EOS; content symbols start at index 2. BOS never
/// carries probability mass and EOS is a predictable event.
class ModelVocab {
 public:
  static constexpr int kBos = 0;
  static constexpr int kEos = 1;
  static constexpr const char* kBosSymbol = "<s>";
  static constexpr const char* kEosSymbol = "</s>";

  ModelVocab() = default;

  /// Content symbols must be distinct and must not collide with the
  /// reserved markers.
  static ModelVocab from_symbols(std::vector<std::string> content_symbols);

  std::size_t size() const { return symbols_.size(); }  // includes BOS and EOS
  std::size_t content_size() const { return symbols_.size() - 2; }
  const std::string& symbol(int index) const;
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::vector<std::string> content_symbols() const;
  std::optional<int> index_of(const std::string& symbol) const;

 private:
  std::vector<std::string> symbols_{kBosSymbol, kEosSymbol};
  std::unordered_map<std::string, int> index_;
};

/// Conditional autoregressive distribution over tokens given a context id.
/// next_logprobs returns one value per vocabulary index (BOS entry is
/// -infinity) and must normalize to 1 in probability within 1e-9; decoders
/// verify this and throw ModelContract on violation.
class SequenceModel {
 public:
  virtual ~SequenceModel() = default;

  virtual const ModelVocab& vocab() const = 0;
  virtual int max_len() const = 0;
  virtual std::vector<double> next_logprobs(const std::string& context,
                                            std::span<const int> prefix) const = 0;
};

/// Decoded sequence. tokens holds content indices only (no EOS); logprob is
/// the sum of per-step model log-probabilities including the terminating EOS
/// step when terminated is set, verifiable with rescore().
struct Hypothesis {
  std::vector<int> tokens;
  double logprob = 0.0;
  bool terminated = false;

  bool truncated_at_max_len(const SequenceModel& model) const {
    return !terminated && static_cast<int>(tokens.size()) >= model.max_len();
  }
};

enum class DecodeMethod { greedy, beam, sample };

struct DecodeConfig {
  DecodeMethod method = DecodeMethod::beam;
  int beam_size = 5;
  double temperature = 1.0;  // 0 is treated as argmax
  int top_k = 0;             // 0 means "all"
  int n_out = 1;
  std::uint64_t seed = 0;
};

struct LoopReport {
  bool looping = false;
  int period = 0;
  double loop_fraction = 0.0;  // tokens inside the detected cycle / sequence length
  bool truncated_at_max_len = false;
};

/// Argmax token each step (ties toward the lowest index) until EOS or max_len.
Hypothesis greedy_decode(const SequenceModel& model, const std::string& context);

/// Standard beam over summed log-probabilities. EOS competes with content
/// tokens for beam slots; a hypothesis leaves the beam into the finished
/// pool only when its termination ranks within the step's top beam_size
/// expansions. Returns the top n_out finished hypotheses (falling back to
/// unfinished ones truncated at max_len), sorted by logprob descending with
/// lexicographic tie-breaks. length_norm > 0 divides the final ranking
/// score by length^length_norm (search pruning stays un-normalized); the
/// default 0 disables it.
std::vector<Hypothesis> beam_search(const SequenceModel& model, const std::string& context,
                                    int beam_size, int n_out = 1, double length_norm = 0.0);

/// Decode length defaults per token domain: 18 for words, 70 for characters
/// and 100 for 40 ms run-length encoded units, long enough that well under
/// a tenth of typical captions are truncated.
int default_max_len(Domain domain);

/// Per step: scale logprobs by 1/t, keep the top_k most probable tokens
/// (ties toward the lowest index; top_k = 0 keeps all), renormalize, draw.
/// t = 0 degenerates to argmax. Sequence i is fully determined by
/// (seed, context, i) regardless of scheduling.
std::vector<Hypothesis> sample_decode(const SequenceModel& model, const std::string& context,
                                      double temperature, int top_k, int n_out,
                                      std::uint64_t seed);

/// Exact argmax over all EOS-terminated sequences up to max_len tokens.
/// Throws TooLarge when the enumeration would exceed 1e7 sequences.
Hypothesis brute_force_mode(const SequenceModel& model, const std::string& context, int max_len);

/// Recomputes a hypothesis' log-probability step by step under the model.
double rescore(const SequenceModel& model, const std::string& context, const Hypothesis& hyp);

/// Scans for the smallest period p <= max_period such that the sequence
/// suffix consists of at least min_reps full repetitions of a p-gram, and
/// reports the longest such suffix.
template <typename T>
LoopReport detect_loops_seq(std::span<const T> seq, int min_reps = 3, int max_period = 8) {
  LoopReport report;
  auto len = static_cast<long>(seq.size());
  for (int p = 1; p <= max_period; ++p) {
    if (len < static_cast<long>(p) * min_reps) continue;
    // longest p-periodic suffix, then trim to whole repetitions
    long periodic = p;
    while (periodic < len && seq[static_cast<std::size_t>(len - 1 - periodic)] ==
                                 seq[static_cast<std::size_t>(len - 1 - periodic + p)]) {
      ++periodic;
    }
    long reps = periodic / p;
    if (reps >= min_reps) {
      report.looping = true;
      report.period = p;
      report.loop_fraction =
          static_cast<double>(reps * p) / static_cast<double>(len);
      return report;
    }
  }
  return report;
}

LoopReport detect_loops(std::span<const int> seq, int min_reps = 3, int max_period = 8);
LoopReport detect_loops(const TokenSeq& seq, int min_reps = 3, int max_period = 8);
LoopReport detect_loops(const SequenceModel& model, const Hypothesis& hyp, int min_reps = 3,
                        int max_period = 8);

}  // namespace segcap

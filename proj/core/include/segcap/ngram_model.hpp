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

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "segcap/decoding.hpp"

namespace segcap {

/// Training pair: a context id and one token sequence observed under it.
using TrainingPair = std::pair<std::string, TokenSeq>;

/// Per-context add-alpha smoothed conditional n-gram model. Contexts unseen
/// at fit time fall back to a model pooled over all contexts. Immutable
/// after fit; safe to share across decoding threads.
class NgramModel : public SequenceModel {
 public:
  /// Counts (order-1)-token histories (BOS padded) against successors,
  /// including the EOS event at each sequence end. Throws EmptyCorpus on an
  /// empty corpus and InvalidArgument for order < 1 or alpha <= 0.
  static NgramModel fit(const std::vector<TrainingPair>& corpus, int order, double alpha,
                        int max_len);

  const ModelVocab& vocab() const override { return vocab_; }
  int max_len() const override { return max_len_; }
  std::vector<double> next_logprobs(const std::string& context,
                                    std::span<const int> prefix) const override;

  int order() const { return order_; }
  double alpha() const { return alpha_; }

  /// Self-describing serialized count table: header {order, alpha,
  /// vocabulary} plus per-context and pooled history counts, as one JSON
  /// document.
  std::string to_json() const;
  static NgramModel from_json(const std::string& text);
  void save(const std::string& path) const;
  static NgramModel load(const std::string& path);

  TokenSeq tokens_to_symbols(const std::vector<int>& tokens) const;
  std::vector<int> symbols_to_tokens(const TokenSeq& symbols) const;

 private:
  // history key -> successor index (EOS or content) -> count
  using CountTable = std::map<std::string, std::map<int, long>>;

  std::string history_key(std::span<const int> prefix) const;

  ModelVocab vocab_;
  int order_ = 2;
  double alpha_ = 1.0;
  int max_len_ = 50;
  std::map<std::string, CountTable> per_context_;
  CountTable pooled_;
};

/// Mean entropy (nats) of the model's next-token distribution along every
/// prefix position of the given corpus. Higher values mean the model is
/// less certain about continuations.
double mean_step_entropy(const SequenceModel& model, const std::vector<TrainingPair>& corpus);

}  // namespace segcap

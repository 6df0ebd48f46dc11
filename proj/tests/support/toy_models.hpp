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

// Test-only sequence models: explicit Markov tables small enough to
// enumerate exhaustively.

#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "segcap/decoding.hpp"
#include "segcap/random.hpp"

namespace segcap::toy {

/// First-order Markov table: one next-token distribution per previous token
/// (BOS rows the start distribution). Rows are over [EOS, content...] and
/// normalized at construction.
class MarkovModel : public SequenceModel {
 public:
  // rows[prev] holds unnormalized weights: index 0 = EOS, 1.. = content
  // symbols. prev = 0 is the BOS row, prev = i >= 1 follows content symbol
  // i-1.
  MarkovModel(std::vector<std::vector<double>> rows, int max_len)
      : rows_(std::move(rows)), max_len_(max_len) {
    std::size_t content = rows_.front().size() - 1;
    std::vector<std::string> symbols;
    for (std::size_t i = 0; i < content; ++i) symbols.push_back("s" + std::to_string(i));
    vocab_ = ModelVocab::from_symbols(symbols);
    for (auto& row : rows_) {
      double total = 0.0;
      for (double w : row) total += w;
      for (double& w : row) w /= total;
    }
  }

  const ModelVocab& vocab() const override { return vocab_; }
  int max_len() const override { return max_len_; }

  std::vector<double> next_logprobs(const std::string& context,
                                    std::span<const int> prefix) const override {
    (void)context;
    std::size_t prev = prefix.empty() ? 0 : static_cast<std::size_t>(prefix.back()) - 1;
    const std::vector<double>& row = rows_.at(prev);
    std::vector<double> out(vocab_.size(), -std::numeric_limits<double>::infinity());
    out[ModelVocab::kEos] = std::log(row[0]);
    for (std::size_t i = 1; i < row.size(); ++i) {
      out[i + 1] = std::log(row[i]);
    }
    return out;
  }

 private:
  std::vector<std::vector<double>> rows_;
  ModelVocab vocab_;
  int max_len_;
};

/// Random dense table with EOS mass at least min_eos everywhere.
inline MarkovModel random_markov(Rng& rng, int content, int max_len, double min_eos = 0.05) {
  std::vector<std::vector<double>> rows;
  for (int prev = 0; prev <= content; ++prev) {
    std::vector<double> row;
    double total = 0.0;
    for (int next = 0; next <= content; ++next) {
      double w = -std::log(1.0 - rng.next_double());
      row.push_back(w);
      total += w;
    }
    if (row[0] < min_eos * total) row[0] = min_eos * total;
    rows.push_back(std::move(row));
  }
  return MarkovModel(std::move(rows), max_len);
}

/// Second enumeration implementation for brute_force_mode: an explicit
/// worklist sweep over every prefix, no pruning.
inline Hypothesis enumerate_mode_oracle(const SequenceModel& model, const std::string& context,
                                        int max_len) {
  Hypothesis best;
  bool found = false;
  std::vector<std::vector<int>> worklist{{}};
  while (!worklist.empty()) {
    std::vector<int> prefix = std::move(worklist.back());
    worklist.pop_back();
    std::vector<double> lp = model.next_logprobs(context, prefix);
    double score = 0.0;
    {
      std::vector<int> replay;
      for (int token : prefix) {
        std::vector<double> step = model.next_logprobs(context, replay);
        score += step[static_cast<std::size_t>(token)];
        replay.push_back(token);
      }
    }
    double terminated_score = score + lp[ModelVocab::kEos];
    Hypothesis candidate{prefix, terminated_score, true};
    if (!found || candidate.logprob > best.logprob ||
        (candidate.logprob == best.logprob && candidate.tokens < best.tokens)) {
      best = candidate;
      found = true;
    }
    if (static_cast<int>(prefix.size()) < max_len) {
      for (int token = 2; token < static_cast<int>(model.vocab().size()); ++token) {
        std::vector<int> extended = prefix;
        extended.push_back(token);
        worklist.push_back(std::move(extended));
      }
    }
  }
  return best;
}

}  // namespace segcap::toy

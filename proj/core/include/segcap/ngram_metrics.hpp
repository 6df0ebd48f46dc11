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

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "segcap/units.hpp"

namespace segcap {

/// Shared n-gram counting substrate for BLEU and CIDEr. Tokens are joined
/// with an unprintable separator so n-gram keys are unambiguous.
class NGramProfile {
 public:
  static constexpr int kMaxOrder = 4;

  NGramProfile() = default;
  explicit NGramProfile(const TokenSeq& seq, int max_order = kMaxOrder);

  int max_order() const { return max_order_; }

  /// Count map for order n (1-based).
  const std::unordered_map<std::string, int>& order(int n) const;

  static std::string key(std::span<const Token> tokens);

 private:
  int max_order_ = 0;
  std::vector<std::unordered_map<std::string, int>> orders_;
};

/// One scored image: a candidate against at least one reference.
struct EvalInstance {
  std::string image_id;
  TokenSeq candidate;
  std::vector<TokenSeq> references;
};

struct MetricReport {
  std::optional<double> bleu4;
  std::optional<double> meteor;
  std::optional<double> rouge_l;
  std::optional<double> cider;
};

/// Corpus-level BLEU: geometric mean of clipped modified n-gram precisions
/// (orders 1..4, uniform weights) aggregated over the corpus, times the
/// brevity penalty exp(min(0, 1 - r/c)) where r sums closest-reference
/// lengths (ties toward the shorter reference). No smoothing: zero overlap
/// at any order gives 0.
double bleu4(const std::vector<EvalInstance>& instances);

/// LCS-based F-measure per reference, max over references, mean over corpus.
double rouge_l(const std::vector<EvalInstance>& instances, double beta = 1.2);

/// TF-IDF weighted n-gram cosine consensus. Document frequency counts one
/// document per image over its reference set; idf = log(N / df) with df
/// clamped to >= 1; plain per-reference cosine averaged over references and
/// orders, without length penalty or rescaling. Cosine against a zero
/// vector is 0, so a single-image corpus scores 0 even on an exact match.
double cider(const std::vector<EvalInstance>& instances);

struct MeteorAlignment {
  int matches = 0;
  int chunks = 0;
};

/// Exact-surface-match unigram alignment maximizing matches and then
/// minimizing chunks. Exact by dynamic program when the shorter side has
/// at most kMeteorExactLimit tokens, greedy longest-common-block beyond
/// that (greedy still attains the maximal match count).
inline constexpr int kMeteorExactLimit = 12;
MeteorAlignment meteor_align(const TokenSeq& candidate, const TokenSeq& reference);

/// Exact-match METEOR: F_mean = P*R / (alpha*P + (1-alpha)*R), fragmentation
/// penalty gamma*(chunks/matches)^beta_frag, score = F_mean*(1 - penalty);
/// max over references, mean over corpus. No stemming or synonymy, hence
/// not comparable with resource-backed METEOR numbers.
double meteor_exact(const std::vector<EvalInstance>& instances, double alpha = 0.9,
                    double beta_frag = 3.0, double gamma = 0.5);

struct MetricSelection {
  bool bleu4 = true;
  bool meteor = true;
  bool rouge_l = true;
  bool cider = true;
};

MetricReport compute_metric_report(const std::vector<EvalInstance>& instances,
                                   const MetricSelection& selection = {});

}  // namespace segcap

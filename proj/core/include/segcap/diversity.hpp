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
#include <optional>
#include <string>
#include <vector>

#include "segcap/decoding.hpp"
#include "segcap/ngram_metrics.hpp"
#include "segcap/spice.hpp"
#include "segcap/units.hpp"

namespace segcap {

struct ScoredCandidate {
  TokenSeq tokens;
  double score = 0.0;
};

/// Per-image candidate list in declared order: beam rank order or sampling
/// draw order. "First n" truncation always follows this order.
struct CandidateSet {
  std::string image_id;
  std::vector<ScoredCandidate> candidates;
  std::optional<DecodeConfig> provenance;  // how the list was produced

  /// Beam provenance requires candidates sorted by score descending;
  /// violations throw InvalidArgument.
  void validate() const;
};

struct CurvePoint {
  std::string method;
  int n = 1;
  std::string metric;
  double value = 0.0;

  bool operator==(const CurvePoint&) const = default;
};

/// Pools the first n candidates of every image, re-normalizes their tokens,
/// and counts distinct words whose total pooled frequency is >= min_count.
/// Throws InsufficientCandidates when an image has fewer than n candidates.
std::size_t vocab_size(const std::vector<CandidateSet>& caption_sets, std::size_t n,
                       int min_count = 3);

/// One decode configuration's outputs over a corpus, in both token and
/// proposition form. propositions may be empty when only n-gram metrics are
/// requested, and candidates may be empty when only SPICE modes are.
struct MethodRun {
  std::string method;
  std::vector<CandidateSet> candidates;
  std::vector<ImagePropositions> propositions;
};

struct MultiCandidateSpec {
  std::vector<SpiceMode> spice_modes;
  bool mspice_precision_recall = false;  // extra m-spice P/R series
  MetricSelection ngram{false, false, false, false};
};

/// Evaluates every method at every n. SPICE modes go through corpus_spice on
/// first-n truncations; n-gram metrics treat each of the first n candidates
/// as one instance against the image's references. Emits one CurvePoint per
/// (method, n, metric).
std::vector<CurvePoint> multi_candidate_eval(
    const std::vector<MethodRun>& runs,
    const std::map<std::string, std::vector<TokenSeq>>& references,
    const MultiCandidateSpec& spec, const std::vector<int>& n_list);

enum class ReportFormat { csv, json };

/// Plot-ready serialization with stable column order (method, n, metric,
/// value), rows sorted by method, then n, then metric; newline terminated
/// and byte-identical across runs for equal inputs.
std::string render_report(std::vector<CurvePoint> points, ReportFormat format);

/// render_report plus an atomic write to the given path.
void emit_report(const std::vector<CurvePoint>& points, ReportFormat format,
                 const std::string& path);

/// Inverse of render_report; the format is sniffed from the content.
std::vector<CurvePoint> parse_report(const std::string& text);

}  // namespace segcap

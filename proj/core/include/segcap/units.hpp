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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "segcap/error.hpp"

namespace segcap {

/// Tokens are plain strings in every domain; unit ids are rendered as their
/// decimal form ("263", "32", ...) so word, character and unit sequences share
/// one metric code path.
using Token = std::string;
using TokenSeq = std::vector<Token>;

enum class Domain { word, character, unit };

const char* domain_name(Domain domain);
std::optional<Domain> domain_from_name(std::string_view name);

/// Ordered inventory of distinct symbols with bijective symbol <-> index
/// lookup. Index 0 is the reserved UNK symbol in pruned vocabularies.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Throws InvalidArgument if symbols contains duplicates.
  Vocabulary(Domain domain, std::vector<std::string> symbols);

  Domain domain() const { return domain_; }
  std::size_t size() const { return symbols_.size(); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::string& symbol(std::size_t index) const;
  std::optional<std::size_t> index_of(std::string_view symbol) const;
  bool contains(std::string_view symbol) const;

 private:
  Domain domain_ = Domain::unit;
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline constexpr const char* kUnkSymbol = "<unk>";

/// Frame-rate unit sequence. frame_shift_ms is carried metadata; nothing in
/// the toolkit resamples between rates.
struct FrameSeq {
  std::vector<int> tokens;
  int frame_shift_ms = 40;

  bool operator==(const FrameSeq&) const = default;
};

struct Run {
  int token = 0;
  std::optional<int> duration;  // frames, >= 1 when present

  bool operator==(const Run&) const = default;
};

/// Run-length encoded unit sequence. No two consecutive runs share a token
/// and durations are all-or-none; both are enforced on construction.
class RleSeq {
 public:
  RleSeq() = default;

  /// Validates the run invariants; throws InvalidArgument on violation.
  static RleSeq from_runs(std::vector<Run> runs);

  const std::vector<Run>& runs() const { return runs_; }
  std::size_t size() const { return runs_.size(); }
  bool empty() const { return runs_.empty(); }
  bool has_durations() const;

  /// Run identities with durations stripped.
  std::vector<int> tokens() const;

  bool operator==(const RleSeq&) const = default;

 private:
  std::vector<Run> runs_;
};

/// Collapses maximal constant segments of `frames` into runs, keeping the
/// per-run frame count only when `keep_durations` is set.
/// Throws EmptySequence on empty input.
RleSeq rle_encode(const FrameSeq& frames, bool keep_durations);

/// Inverse of rle_encode(.., keep_durations=true). Throws MissingDurations
/// if any run lacks a duration.
FrameSeq rle_expand(const RleSeq& rle, int frame_shift_ms);

/// Lower-cases ASCII letters, deletes characters that are neither letters,
/// digits nor whitespace (no space inserted, so "man's" becomes "mans"),
/// then splits on whitespace. Empty tokens are dropped. Idempotent on its
/// own output.
TokenSeq normalize_text(std::string_view raw);

struct PrunedCorpus {
  Vocabulary vocabulary;           // UNK at index 0, then first-occurrence order
  std::vector<TokenSeq> corpus;    // occurrences below min_count replaced by UNK
};

/// Keeps symbols whose total corpus frequency is >= min_count (the boundary
/// is inclusive); everything else maps to the reserved UNK at index 0.
PrunedCorpus prune_vocabulary(const std::vector<TokenSeq>& corpus, int min_count = 5);

struct Utterance {
  std::string id;
  TokenSeq tokens;
  std::optional<double> duration_s;
  std::optional<std::string> speaker_id;
};

struct CorpusStats {
  std::size_t num_utterances = 0;
  std::size_t num_speakers = 0;
  double duration_mean_s = 0.0;
  double duration_std_s = 0.0;   // population standard deviation
  double words_per_utterance = 0.0;
  double words_per_second = 0.0;
  double total_duration_hr = 0.0;
  std::size_t vocabulary_size = 0;
};

/// Corpus-level statistics. Utterances longer than `duration_exclusion_s`
/// are dropped from the duration moments and words-per-second only; they
/// still count toward num_utterances, word counts, vocabulary and total
/// duration. Word-level numbers are computed after normalize_text.
CorpusStats corpus_stats(const std::vector<Utterance>& utterances,
                         std::optional<double> duration_exclusion_s = std::nullopt);

/// Decimal rendering of unit ids, the shared currency for unit-domain metrics.
TokenSeq units_to_tokens(const std::vector<int>& units);

}  // namespace segcap

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

#include "segcap/units.hpp"

#include <cctype>
#include <cmath>
#include <set>
#include <unordered_set>

namespace segcap {

const char* domain_name(Domain domain) {
  switch (domain) {
    case Domain::word: return "word";
    case Domain::character: return "char";
    case Domain::unit: return "unit";
  }
  return "unit";
}

std::optional<Domain> domain_from_name(std::string_view name) {
  if (name == "word") return Domain::word;
  if (name == "char" || name == "character") return Domain::character;
  if (name == "unit") return Domain::unit;
  return std::nullopt;
}

Vocabulary::Vocabulary(Domain domain, std::vector<std::string> symbols)
    : domain_(domain), symbols_(std::move(symbols)) {
  index_.reserve(symbols_.size());
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!index_.emplace(symbols_[i], i).second) {
      fail(Errc::InvalidArgument, "duplicate vocabulary symbol: " + symbols_[i]);
    }
  }
}

const std::string& Vocabulary::symbol(std::size_t index) const {
  if (index >= symbols_.size()) {
    fail(Errc::InvalidArgument, "vocabulary index out of range");
  }
  return symbols_[index];
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view symbol) const {
  auto it = index_.find(std::string(symbol));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Vocabulary::contains(std::string_view symbol) const {
  return index_of(symbol).has_value();
}

RleSeq RleSeq::from_runs(std::vector<Run> runs) {
  bool any_duration = false;
  bool all_durations = true;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (i > 0 && runs[i].token == runs[i - 1].token) {
      fail(Errc::InvalidArgument, "consecutive runs share a token");
    }
    if (runs[i].duration.has_value()) {
      any_duration = true;
      if (*runs[i].duration < 1) {
        fail(Errc::InvalidArgument, "run duration must be >= 1");
      }
    } else {
      all_durations = false;
    }
  }
  if (any_duration && !all_durations) {
    fail(Errc::InvalidArgument, "durations must be present on all runs or none");
  }
  RleSeq out;
  out.runs_ = std::move(runs);
  return out;
}

bool RleSeq::has_durations() const {
  return !runs_.empty() && runs_.front().duration.has_value();
}

std::vector<int> RleSeq::tokens() const {
  std::vector<int> out;
  out.reserve(runs_.size());
  for (const Run& run : runs_) out.push_back(run.token);
  return out;
}

RleSeq rle_encode(const FrameSeq& frames, bool keep_durations) {
  if (frames.tokens.empty()) {
    fail(Errc::EmptySequence, "rle_encode: empty frame sequence");
  }
  std::vector<Run> runs;
  int current = frames.tokens.front();
  int length = 0;
  for (int token : frames.tokens) {
    if (token == current) {
      ++length;
      continue;
    }
    runs.push_back(Run{current, keep_durations ? std::optional<int>(length) : std::nullopt});
    current = token;
    length = 1;
  }
  runs.push_back(Run{current, keep_durations ? std::optional<int>(length) : std::nullopt});
  return RleSeq::from_runs(std::move(runs));
}

FrameSeq rle_expand(const RleSeq& rle, int frame_shift_ms) {
  FrameSeq out;
  out.frame_shift_ms = frame_shift_ms;
  for (const Run& run : rle.runs()) {
    if (!run.duration.has_value()) {
      fail(Errc::MissingDurations, "rle_expand: run without duration");
    }
    out.tokens.insert(out.tokens.end(), static_cast<std::size_t>(*run.duration), run.token);
  }
  return out;
}

TokenSeq normalize_text(std::string_view raw) {
  TokenSeq out;
  std::string current;
  for (char c : raw) {
    unsigned char uc = static_cast<unsigned char>(c);
    if (std::isspace(uc)) {
      if (!current.empty()) {
        out.push_back(std::move(current));
        current.clear();
      }
    } else if (std::isalpha(uc)) {
      current.push_back(static_cast<char>(std::tolower(uc)));
    } else if (std::isdigit(uc)) {
      current.push_back(c);
    }
    // anything else is deleted in place, no boundary introduced
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

PrunedCorpus prune_vocabulary(const std::vector<TokenSeq>& corpus, int min_count) {
  if (min_count < 1) {
    fail(Errc::InvalidArgument, "prune_vocabulary: min_count must be >= 1");
  }
  std::unordered_map<std::string, int> counts;
  std::vector<std::string> first_seen;
  for (const TokenSeq& seq : corpus) {
    for (const Token& token : seq) {
      if (++counts[token] == 1) first_seen.push_back(token);
    }
  }

  std::vector<std::string> symbols;
  symbols.push_back(kUnkSymbol);
  for (const std::string& token : first_seen) {
    if (counts[token] >= min_count) symbols.push_back(token);
  }
  Vocabulary vocabulary(Domain::word, std::move(symbols));

  PrunedCorpus out{std::move(vocabulary), {}};
  out.corpus.reserve(corpus.size());
  for (const TokenSeq& seq : corpus) {
    TokenSeq mapped;
    mapped.reserve(seq.size());
    for (const Token& token : seq) {
      mapped.push_back(counts[token] >= min_count ? token : Token(kUnkSymbol));
    }
    out.corpus.push_back(std::move(mapped));
  }
  return out;
}

CorpusStats corpus_stats(const std::vector<Utterance>& utterances,
                         std::optional<double> duration_exclusion_s) {
  CorpusStats stats;
  stats.num_utterances = utterances.size();

  std::unordered_set<std::string> speakers;
  std::unordered_set<std::string> vocabulary;
  std::size_t total_words = 0;

  double dur_sum = 0.0, dur_sq_sum = 0.0, total_duration_s = 0.0;
  std::size_t dur_count = 0;
  std::size_t words_in_timed = 0;
  double timed_duration_s = 0.0;

  for (const Utterance& utt : utterances) {
    if (utt.speaker_id) speakers.insert(*utt.speaker_id);

    std::size_t words_here = 0;
    for (const Token& token : utt.tokens) {
      for (Token& word : normalize_text(token)) {
        ++words_here;
        vocabulary.insert(std::move(word));
      }
    }
    total_words += words_here;

    if (utt.duration_s) {
      double d = *utt.duration_s;
      total_duration_s += d;
      bool excluded = duration_exclusion_s && d > *duration_exclusion_s;
      if (!excluded) {
        dur_sum += d;
        dur_sq_sum += d * d;
        ++dur_count;
        timed_duration_s += d;
        words_in_timed += words_here;
      }
    }
  }

  stats.num_speakers = speakers.size();
  stats.vocabulary_size = vocabulary.size();
  stats.total_duration_hr = total_duration_s / 3600.0;
  if (stats.num_utterances > 0) {
    stats.words_per_utterance =
        static_cast<double>(total_words) / static_cast<double>(stats.num_utterances);
  }
  if (dur_count > 0) {
    stats.duration_mean_s = dur_sum / static_cast<double>(dur_count);
    double var = dur_sq_sum / static_cast<double>(dur_count) -
                 stats.duration_mean_s * stats.duration_mean_s;
    stats.duration_std_s = std::sqrt(var > 0.0 ? var : 0.0);
  }
  if (timed_duration_s > 0.0) {
    stats.words_per_second = static_cast<double>(words_in_timed) / timed_duration_s;
  }
  return stats;
}

TokenSeq units_to_tokens(const std::vector<int>& units) {
  TokenSeq out;
  out.reserve(units.size());
  for (int unit : units) out.push_back(std::to_string(unit));
  return out;
}

}  // namespace segcap

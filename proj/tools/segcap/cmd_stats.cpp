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

#include <json.hpp>

#include "commands.hpp"
#include "common.hpp"

namespace segcap::cli {

void run_stats(const StatsOptions& options) {
  std::vector<UtteranceRecord> records = read_utterance_records(options.in);
  std::vector<Utterance> utterances;
  utterances.reserve(records.size());
  for (UtteranceRecord& record : records) {
    utterances.push_back(Utterance{std::move(record.id), normalize_text(record.caption),
                                   record.duration_s, record.speaker});
  }
  std::optional<double> threshold;
  if (options.max_duration > 0.0) threshold = options.max_duration;
  CorpusStats stats = corpus_stats(utterances, threshold);

  nlohmann::json doc;
  doc["num_utterances"] = stats.num_utterances;
  doc["num_speakers"] = stats.num_speakers;
  doc["duration_mean_s"] = stats.duration_mean_s;
  doc["duration_std_s"] = stats.duration_std_s;
  doc["words_per_utterance"] = stats.words_per_utterance;
  doc["words_per_second"] = stats.words_per_second;
  doc["total_duration_hr"] = stats.total_duration_hr;
  doc["vocabulary_size"] = stats.vocabulary_size;
  write_output(options.out, doc.dump(2) + "\n");
}

}  // namespace segcap::cli

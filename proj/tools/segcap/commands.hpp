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
#include <string>
#include <vector>

namespace segcap::cli {

struct RleOptions {
  bool expand = false;
  std::string in;
  std::string out = "-";
  bool keep_durations = false;
};
void run_rle(const RleOptions& options);

struct StatsOptions {
  std::string in;
  std::string out = "-";
  double max_duration = 0.0;  // 0 disables the exclusion threshold
};
void run_stats(const StatsOptions& options);

struct EvalNgramOptions {
  std::string candidates;
  std::string references;
  std::string domain = "word";
  std::string metrics = "bleu4,rouge,cider,meteor";
  std::string out = "-";
};
void run_eval_ngram(const EvalNgramOptions& options);

struct EvalSpiceOptions {
  std::string props;
  std::string mode = "m-spice";
  int n = 1;
  std::string out = "-";
};
void run_eval_spice(const EvalSpiceOptions& options);

struct DecodeOptions {
  std::string model;
  std::string contexts;
  std::string method = "beam";
  int beam = 5;
  double temperature = 1.0;
  int top_k = 0;  // 0 keeps all
  int n = 1;
  std::uint64_t seed = 0;
  std::string out = "-";
};
void run_decode(const DecodeOptions& options);

struct VocabOptions {
  std::string candidates;
  int n = 1;
  int min_count = 3;
  std::string out = "-";
};
void run_vocab(const VocabOptions& options);

struct SimulateOptions {
  std::string grammar;
  std::string conditions = "rle_clean,rle_corrupt,norle_clean";
  std::uint64_t seed = 42;
  std::string out_dir;
  int n_per_context = 50;
  int beam = 5;
  double temperature = 0.7;
  int top_k = 5;
  int n_samples = 3;
  int order = 2;
  double alpha = 0.05;
};
void run_simulate(const SimulateOptions& options);

struct ReportOptions {
  std::string points;
  std::string format = "csv";
  std::string out = "-";
};
void run_report(const ReportOptions& options);

struct ValidateOptions {
  std::string in;
  std::string candidates;
  std::string references;
  std::string schema;
};
/// Returns the number of diagnostics printed.
std::size_t run_validate(const ValidateOptions& options);

}  // namespace segcap::cli

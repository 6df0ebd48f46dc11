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
#include "segcap/ngram_model.hpp"
#include "segcap/parallel.hpp"

namespace segcap::cli {

namespace {

nlohmann::json hypothesis_record(const NgramModel& model, const std::string& context,
                                 int candidate_id, const Hypothesis& hyp) {
  TokenSeq symbols = model.tokens_to_symbols(hyp.tokens);
  std::string caption;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i > 0) caption.push_back(' ');
    caption += symbols[i];
  }
  LoopReport loop = detect_loops(model, hyp);

  nlohmann::json doc;
  doc["image_id"] = context;
  doc["candidate_id"] = candidate_id;
  doc["caption"] = caption;
  doc["logprob"] = hyp.logprob;
  doc["terminated"] = hyp.terminated;
  doc["truncated_at_max_len"] = loop.truncated_at_max_len;
  doc["looping"] = loop.looping;
  if (loop.looping) {
    doc["loop_period"] = loop.period;
    doc["loop_fraction"] = loop.loop_fraction;
  }
  return doc;
}

}  // namespace

void run_decode(const DecodeOptions& options) {
  NgramModel model = NgramModel::load(options.model);
  std::vector<std::string> contexts = read_context_ids(options.contexts);
  if (contexts.empty()) fail(Errc::EmptyCorpus, "contexts file has no records");

  // per-context decodes are independent; results land in slots ordered by
  // input position so the output stream never depends on the thread count
  std::vector<std::vector<Hypothesis>> decoded(contexts.size());
  parallel_for_indexed(contexts.size(), [&](std::size_t i) {
    const std::string& context = contexts[i];
    if (options.method == "greedy") {
      decoded[i] = {greedy_decode(model, context)};
    } else if (options.method == "beam") {
      decoded[i] = beam_search(model, context, options.beam, options.n);
    } else if (options.method == "sample") {
      decoded[i] =
          sample_decode(model, context, options.temperature, options.top_k, options.n,
                        options.seed);
    } else {
      fail(Errc::InvalidArgument, "unknown method '" + options.method + "'");
    }
  });

  std::string out;
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    for (std::size_t j = 0; j < decoded[i].size(); ++j) {
      out += hypothesis_record(model, contexts[i], static_cast<int>(j), decoded[i][j]).dump();
      out += '\n';
    }
  }
  write_output(options.out, out);
}

}  // namespace segcap::cli

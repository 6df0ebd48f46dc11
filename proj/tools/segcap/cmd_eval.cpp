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

#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "common.hpp"
#include "segcap/ngram_metrics.hpp"
#include "segcap/spice.hpp"

namespace segcap::cli {

namespace {

MetricSelection parse_metric_list(const std::string& list) {
  MetricSelection selection{false, false, false, false};
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "bleu4" || item == "bleu") {
      selection.bleu4 = true;
    } else if (item == "meteor") {
      selection.meteor = true;
    } else if (item == "rouge" || item == "rouge_l") {
      selection.rouge_l = true;
    } else if (item == "cider") {
      selection.cider = true;
    } else if (!item.empty()) {
      fail(Errc::InvalidArgument, "unknown metric '" + item + "'");
    }
  }
  if (!selection.bleu4 && !selection.meteor && !selection.rouge_l && !selection.cider) {
    fail(Errc::InvalidArgument, "no metrics selected");
  }
  return selection;
}

void require_matching_ids(const std::vector<std::string>& candidate_ids,
                          const std::vector<std::string>& reference_ids) {
  std::vector<Diagnostic> diagnostics = check_id_match(candidate_ids, reference_ids);
  if (!diagnostics.empty()) {
    fail(Errc::IdMismatch, diagnostics.front().message);
  }
}

}  // namespace

void run_eval_ngram(const EvalNgramOptions& options) {
  auto domain = domain_from_name(options.domain);
  if (!domain) fail(Errc::InvalidArgument, "unknown domain '" + options.domain + "'");
  MetricSelection selection = parse_metric_list(options.metrics);

  std::vector<CaptionRecord> cand_records = read_caption_records(options.candidates);
  std::vector<CaptionRecord> ref_records = read_caption_records(options.references);

  std::vector<CandidateSet> candidates = group_candidates(cand_records, *domain);
  std::map<std::string, std::vector<TokenSeq>> references;
  for (const CaptionRecord& record : ref_records) {
    references[record.image_id].push_back(caption_tokens(record.caption, *domain));
  }

  std::vector<std::string> cand_ids, ref_ids;
  for (const CandidateSet& set : candidates) cand_ids.push_back(set.image_id);
  for (const auto& [id, refs] : references) ref_ids.push_back(id);
  require_matching_ids(cand_ids, ref_ids);

  // one instance per image: the first candidate in declared order
  std::vector<EvalInstance> instances;
  instances.reserve(candidates.size());
  for (const CandidateSet& set : candidates) {
    instances.push_back(
        EvalInstance{set.image_id, set.candidates.front().tokens, references.at(set.image_id)});
  }
  MetricReport report = compute_metric_report(instances, selection);

  nlohmann::json doc;
  doc["domain"] = domain_name(*domain);
  doc["num_images"] = instances.size();
  nlohmann::json metrics = nlohmann::json::object();
  if (report.bleu4) metrics["bleu4"] = *report.bleu4;
  if (report.meteor) metrics["meteor"] = *report.meteor;
  if (report.rouge_l) metrics["rouge_l"] = *report.rouge_l;
  if (report.cider) metrics["cider"] = *report.cider;
  doc["metrics"] = std::move(metrics);
  write_output(options.out, doc.dump(2) + "\n");
}

void run_eval_spice(const EvalSpiceOptions& options) {
  SpiceMode mode;
  if (options.mode == "m-spice" || options.mode == "mspice") {
    mode = SpiceMode::m_spice;
  } else if (options.mode == "avg") {
    mode = SpiceMode::avg;
  } else if (options.mode == "oracle") {
    mode = SpiceMode::oracle;
  } else if (options.mode == "single") {
    mode = SpiceMode::single;
  } else {
    fail(Errc::InvalidArgument, "unknown mode '" + options.mode + "'");
  }
  if (options.n < 1) fail(Errc::InvalidArgument, "n must be >= 1");

  std::vector<ImagePropositions> images =
      group_propositions(read_prop_records(options.props), true);
  CorpusSpice result = corpus_spice(images, mode, static_cast<std::size_t>(options.n));

  bool with_pr = mode == SpiceMode::m_spice || mode == SpiceMode::single;
  nlohmann::json doc;
  doc["mode"] = spice_mode_name(mode);
  doc["n"] = options.n;
  nlohmann::json corpus;
  corpus["f1"] = result.score;
  if (with_pr) {
    corpus["precision"] = result.precision;
    corpus["recall"] = result.recall;
  }
  doc["corpus"] = std::move(corpus);
  nlohmann::json per_image = nlohmann::json::array();
  for (std::size_t i = 0; i < images.size(); ++i) {
    nlohmann::json row;
    row["image_id"] = images[i].image_id;
    row["f1"] = result.per_image[i].f1;
    if (with_pr) {
      row["precision"] = result.per_image[i].precision;
      row["recall"] = result.per_image[i].recall;
    }
    per_image.push_back(std::move(row));
    std::cerr << "segcap: " << images[i].image_id << " " << spice_mode_name(mode)
              << " f1=" << result.per_image[i].f1 << "\n";
  }
  doc["images"] = std::move(per_image);
  write_output(options.out, doc.dump(2) + "\n");
}

}  // namespace segcap::cli

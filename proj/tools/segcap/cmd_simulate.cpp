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

#include <filesystem>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "common.hpp"
#include "segcap/harness.hpp"

namespace segcap::cli {

void run_simulate(const SimulateOptions& options) {
  ToyGrammar grammar = ToyGrammar::from_json(read_file(options.grammar));

  std::vector<CascadeCondition> conditions;
  {
    std::stringstream in(options.conditions);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (item.empty()) continue;
      auto condition = condition_from_name(item);
      if (!condition) fail(Errc::InvalidArgument, "unknown condition '" + item + "'");
      conditions.push_back(*condition);
    }
  }
  if (conditions.empty()) fail(Errc::InvalidArgument, "no conditions selected");

  CascadeConfig config;
  config.n_per_context = options.n_per_context;
  config.beam_size = options.beam;
  config.sample_temperature = options.temperature;
  config.sample_top_k = options.top_k;
  config.n_samples = options.n_samples;
  config.order = options.order;
  config.alpha = options.alpha;

  CascadeReport report = run_cascade_experiment(grammar, conditions, config, options.seed);

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) fail(Errc::IoError, "cannot create output directory " + options.out_dir);
  auto path = [&](const std::string& name) { return (fs::path(options.out_dir) / name).string(); };

  std::vector<CurvePoint> points = report.to_points();
  write_output(path("report.csv"), render_report(points, ReportFormat::csv));
  write_output(path("report.json"), render_report(points, ReportFormat::json));

  for (const ConditionOutcome& cond : report.conditions) {
    std::string base = condition_name(cond.condition);
    cond.model.save(path("model_" + base + ".json"));

    std::string decodes;
    for (const MethodOutcome& method : cond.methods) {
      std::map<std::string, int> next_candidate;
      for (std::size_t i = 0; i < method.rendered.size(); ++i) {
        nlohmann::json row;
        row["image_id"] = method.contexts[i];
        row["method"] = method.method;
        row["candidate_id"] = next_candidate[method.contexts[i]]++;
        std::string caption;
        for (std::size_t w = 0; w < method.rendered[i].size(); ++w) {
          if (w > 0) caption.push_back(' ');
          caption += method.rendered[i][w];
        }
        row["caption"] = caption;
        decodes += row.dump();
        decodes += '\n';
      }
      std::cerr << "segcap: " << base << "/" << method.method
                << " loop_rate=" << method.loop_rate << " bleu4=" << method.word_bleu4
                << " spice=" << method.spice_f1 << "\n";
    }
    write_output(path("decodes_" + base + ".jsonl"), decodes);
  }
}

}  // namespace segcap::cli

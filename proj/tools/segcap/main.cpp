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

// segcap: evaluation, encoding and decoding toolkit for discrete-unit
// caption pipelines. One subcommand per stage; JSON Lines in, JSON/CSV out;
// every run is reproducible from its flags and seed.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "common.hpp"
#include "segcap/parallel.hpp"

namespace {

using namespace segcap;
using namespace segcap::cli;

int dispatch(int argc, char** argv) {
  CLI::App app{"sequence evaluation and decoding toolkit for unit-based captioning"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file; flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);  // unknown keys are rejected
  app.fallthrough(false);

  std::size_t threads = 0;
  app.add_option("--threads", threads, "worker thread cap (0 = hardware)")
      ->envname("SEGCAP_THREADS");

  // rle encode|expand
  RleOptions rle;
  CLI::App* rle_cmd = app.add_subcommand("rle", "run-length codec for unit transcripts");
  rle_cmd->require_subcommand(1);
  CLI::App* rle_encode_cmd = rle_cmd->add_subcommand("encode", "collapse frame runs");
  rle_encode_cmd->add_option("--in", rle.in, "unit transcript JSONL")->required();
  rle_encode_cmd->add_option("--out", rle.out, "output path or -");
  rle_encode_cmd->add_flag("--keep-durations", rle.keep_durations, "keep per-run frame counts");
  CLI::App* rle_expand_cmd = rle_cmd->add_subcommand("expand", "re-expand runs to frames");
  rle_expand_cmd->add_option("--in", rle.in, "RLE transcript JSONL with durations")->required();
  rle_expand_cmd->add_option("--out", rle.out, "output path or -");

  // stats
  StatsOptions stats;
  CLI::App* stats_cmd = app.add_subcommand("stats", "corpus statistics over utterances");
  stats_cmd->add_option("--in", stats.in, "utterance JSONL (id, caption, duration_s?)")
      ->required();
  stats_cmd->add_option("--max-duration", stats.max_duration,
                        "exclude longer utterances from duration moments (seconds)");
  stats_cmd->add_option("--out", stats.out, "output path or -");

  // eval ngram|spice
  CLI::App* eval_cmd = app.add_subcommand("eval", "caption metrics");
  eval_cmd->require_subcommand(1);
  EvalNgramOptions eval_ngram;
  CLI::App* ngram_cmd = eval_cmd->add_subcommand("ngram", "BLEU-4 / ROUGE-L / CIDEr / METEOR");
  ngram_cmd->add_option("--candidates", eval_ngram.candidates, "candidate captions JSONL")
      ->required();
  ngram_cmd->add_option("--references", eval_ngram.references, "reference captions JSONL")
      ->required();
  ngram_cmd->add_option("--domain", eval_ngram.domain, "word|char|unit (default word)");
  ngram_cmd->add_option("--metric", eval_ngram.metrics,
                        "comma list of bleu4,rouge,cider,meteor (default all)");
  ngram_cmd->add_option("--out", eval_ngram.out, "report path or -");

  EvalSpiceOptions eval_spice;
  CLI::App* spice_cmd = eval_cmd->add_subcommand("spice", "proposition F-scores");
  spice_cmd->add_option("--props", eval_spice.props, "proposition JSONL")->required();
  spice_cmd->add_option("--mode", eval_spice.mode, "m-spice|avg|oracle|single");
  spice_cmd->add_option("--n", eval_spice.n, "candidates per image to score");
  spice_cmd->add_option("--out", eval_spice.out, "report path or -");

  // decode
  DecodeOptions decode;
  CLI::App* decode_cmd = app.add_subcommand("decode", "decode contexts under a count-table model");
  decode_cmd->add_option("--model", decode.model, "serialized model JSON")->required();
  decode_cmd->add_option("--contexts", decode.contexts, "JSONL of {\"id\": ...}")->required();
  decode_cmd->add_option("--method", decode.method, "beam|sample|greedy");
  decode_cmd->add_option("--beam", decode.beam, "beam size");
  decode_cmd->add_option("--t", decode.temperature, "sampling temperature (0 = argmax)");
  decode_cmd->add_option("--k", decode.top_k, "top-k truncation (0 = all)");
  decode_cmd->add_option("--n", decode.n, "candidates per context");
  decode_cmd->add_option("--seed", decode.seed, "sampling seed");
  decode_cmd->add_option("--out", decode.out, "output path or -");

  // vocab
  VocabOptions vocab;
  CLI::App* vocab_cmd = app.add_subcommand("vocab", "pooled vocabulary size estimate");
  vocab_cmd->add_option("--candidates", vocab.candidates, "candidate captions JSONL")->required();
  vocab_cmd->add_option("--n", vocab.n, "candidates pooled per image")->required();
  vocab_cmd->add_option("--min-count", vocab.min_count, "frequency threshold (default 3)");
  vocab_cmd->add_option("--out", vocab.out, "output path or -");

  // simulate
  SimulateOptions simulate;
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "desk-scale cascade experiment");
  simulate_cmd->add_option("--grammar", simulate.grammar, "grammar JSON")->required();
  simulate_cmd->add_option("--conditions", simulate.conditions,
                           "comma list of rle_clean,rle_corrupt,norle_clean");
  simulate_cmd->add_option("--seed", simulate.seed, "experiment seed");
  simulate_cmd->add_option("--out", simulate.out_dir, "output directory")->required();
  simulate_cmd->add_option("--n-per-context", simulate.n_per_context, "utterances per scene");
  simulate_cmd->add_option("--beam", simulate.beam, "beam size");
  simulate_cmd->add_option("--t", simulate.temperature, "sampling temperature");
  simulate_cmd->add_option("--k", simulate.top_k, "sampling top-k");
  simulate_cmd->add_option("--n-samples", simulate.n_samples, "samples per scene");
  simulate_cmd->add_option("--order", simulate.order, "n-gram order");
  simulate_cmd->add_option("--alpha", simulate.alpha, "add-alpha smoothing");

  // report
  ReportOptions report;
  CLI::App* report_cmd = app.add_subcommand("report", "re-render curve points");
  report_cmd->add_option("--points", report.points, "points file (csv or json)")->required();
  report_cmd->add_option("--format", report.format, "csv|json");
  report_cmd->add_option("--out", report.out, "output path or -");

  // validate
  ValidateOptions validate;
  CLI::App* validate_cmd = app.add_subcommand("validate", "schema and pairing diagnostics");
  validate_cmd->add_option("--in", validate.in, "single file to validate");
  validate_cmd->add_option("--candidates", validate.candidates, "candidate side of a pair");
  validate_cmd->add_option("--references", validate.references, "reference side of a pair");
  validate_cmd->add_option("--schema", validate.schema, "transcript|captions|props|points")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help and friends
    }
    std::cerr << "segcap: error: " << errc_name(Errc::InvalidArgument) << ": " << e.what()
              << "\n";
    return kExitValidation;
  }

  set_worker_threads(threads);

  try {
    if (rle_cmd->parsed()) {
      rle.expand = rle_expand_cmd->parsed();
      run_rle(rle);
    } else if (stats_cmd->parsed()) {
      run_stats(stats);
    } else if (ngram_cmd->parsed()) {
      run_eval_ngram(eval_ngram);
    } else if (spice_cmd->parsed()) {
      run_eval_spice(eval_spice);
    } else if (decode_cmd->parsed()) {
      run_decode(decode);
    } else if (vocab_cmd->parsed()) {
      run_vocab(vocab);
    } else if (simulate_cmd->parsed()) {
      run_simulate(simulate);
    } else if (report_cmd->parsed()) {
      run_report(report);
    } else if (validate_cmd->parsed()) {
      if (run_validate(validate) > 0) return kExitValidation;
    }
  } catch (const Error& e) {
    print_error(e.code(), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    print_error(Errc::InvalidArgument, e.what());
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }

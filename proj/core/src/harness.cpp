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

#include "segcap/harness.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "segcap/ngram_metrics.hpp"
#include "segcap/random.hpp"
#include "segcap/spice.hpp"

namespace segcap {

namespace {

std::vector<int> template_units(const ToyGrammar& grammar, const CaptionTemplate& tpl) {
  std::vector<int> units;
  for (const std::string& word : tpl.words) {
    const std::vector<int>& pron = grammar.lexicon.at(word);
    units.insert(units.end(), pron.begin(), pron.end());
  }
  return units;
}

PropositionBag unigram_bag(const std::vector<std::string>& words) {
  PropositionBag bag;
  for (const std::string& word : words) bag.insert(Proposition({word}));
  return bag;
}

}  // namespace

void ToyGrammar::validate() const {
  if (scenes.empty()) fail(Errc::InvalidGrammar, "grammar has no scenes");
  if (speakers.empty()) fail(Errc::InvalidGrammar, "grammar has no speakers");
  if (duration_max < 1) fail(Errc::InvalidGrammar, "duration_max must be >= 1");
  if (corruption.split_prob < 0.0 || corruption.split_prob > 1.0) {
    fail(Errc::InvalidGrammar, "corruption split_prob must be in [0, 1]");
  }
  if (corruption.num_surrogates < 1) {
    fail(Errc::InvalidGrammar, "corruption num_surrogates must be >= 1");
  }

  for (const auto& [word, units] : lexicon) {
    if (word.empty()) fail(Errc::InvalidGrammar, "lexicon contains an empty word");
    if (units.empty()) fail(Errc::InvalidGrammar, "lexicon entry '" + word + "' has no units");
    for (int unit : units) {
      if (unit < 0) fail(Errc::InvalidGrammar, "lexicon entry '" + word + "' has a negative unit");
    }
  }

  // prefix-free lexicon keeps longest-match segmentation unambiguous
  for (const auto& [word_a, units_a] : lexicon) {
    for (const auto& [word_b, units_b] : lexicon) {
      if (word_a == word_b) continue;
      if (units_a.size() > units_b.size()) continue;
      if (std::equal(units_a.begin(), units_a.end(), units_b.begin())) {
        fail(Errc::InvalidGrammar, "ambiguous lexicon: units of '" + word_a +
                                       "' are a prefix of units of '" + word_b + "'");
      }
    }
  }

  for (const SceneSpec& scene : scenes) {
    if (scene.id.empty()) fail(Errc::InvalidGrammar, "scene with empty id");
    if (scene.templates.empty()) {
      fail(Errc::InvalidGrammar, "scene '" + scene.id + "' has no templates");
    }
    for (const CaptionTemplate& tpl : scene.templates) {
      if (tpl.words.empty()) {
        fail(Errc::InvalidGrammar, "scene '" + scene.id + "' has an empty template");
      }
      if (!(tpl.weight > 0.0)) {
        fail(Errc::InvalidGrammar, "scene '" + scene.id + "' has a non-positive weight");
      }
      for (const std::string& word : tpl.words) {
        if (!lexicon.count(word)) {
          fail(Errc::InvalidGrammar, "template word '" + word + "' is not in the lexicon");
        }
      }
      // consecutive duplicate units would not survive the RLE projection
      std::vector<int> units = template_units(*this, tpl);
      for (std::size_t i = 1; i < units.size(); ++i) {
        if (units[i] == units[i - 1]) {
          fail(Errc::InvalidGrammar, "template in scene '" + scene.id +
                                         "' produces consecutive duplicate unit " +
                                         std::to_string(units[i]));
        }
      }
    }
  }

  // the renderer must invert every clean template
  LexiconRenderer renderer(*this);
  for (const SceneSpec& scene : scenes) {
    for (const CaptionTemplate& tpl : scene.templates) {
      auto rendering = renderer.render(template_units(*this, tpl));
      if (rendering.words != tpl.words || rendering.skipped_units != 0) {
        fail(Errc::InvalidGrammar,
             "template in scene '" + scene.id + "' does not render back to its words");
      }
    }
  }
}

std::string ToyGrammar::to_json() const {
  nlohmann::json doc;
  nlohmann::json scenes_json = nlohmann::json::array();
  for (const SceneSpec& scene : scenes) {
    nlohmann::json templates = nlohmann::json::array();
    for (const CaptionTemplate& tpl : scene.templates) {
      templates.push_back({{"words", tpl.words}, {"weight", tpl.weight}});
    }
    scenes_json.push_back({{"id", scene.id}, {"templates", templates}});
  }
  doc["scenes"] = std::move(scenes_json);
  nlohmann::json lexicon_json = nlohmann::json::object();
  for (const auto& [word, units] : lexicon) lexicon_json[word] = units;
  doc["lexicon"] = std::move(lexicon_json);
  doc["duration_max"] = duration_max;
  doc["frame_shift_ms"] = frame_shift_ms;
  doc["speakers"] = speakers;
  doc["corruption"] = {{"split_prob", corruption.split_prob},
                       {"num_surrogates", corruption.num_surrogates},
                       {"speaker_conditioned", corruption.speaker_conditioned}};
  return doc.dump(2) + "\n";
}

ToyGrammar ToyGrammar::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("grammar file is not valid JSON: ") + e.what());
  }
  try {
    ToyGrammar grammar;
    for (const auto& scene_json : doc.at("scenes")) {
      SceneSpec scene;
      scene.id = scene_json.at("id").get<std::string>();
      for (const auto& tpl_json : scene_json.at("templates")) {
        CaptionTemplate tpl;
        tpl.words = tpl_json.at("words").get<std::vector<std::string>>();
        tpl.weight = tpl_json.value("weight", 1.0);
        scene.templates.push_back(std::move(tpl));
      }
      grammar.scenes.push_back(std::move(scene));
    }
    for (auto it = doc.at("lexicon").begin(); it != doc.at("lexicon").end(); ++it) {
      grammar.lexicon[it.key()] = it.value().get<std::vector<int>>();
    }
    grammar.duration_max = doc.value("duration_max", 4);
    grammar.frame_shift_ms = doc.value("frame_shift_ms", 40);
    if (doc.contains("speakers")) {
      grammar.speakers = doc.at("speakers").get<std::vector<std::string>>();
    }
    if (doc.contains("corruption")) {
      const auto& corr = doc.at("corruption");
      grammar.corruption.split_prob = corr.value("split_prob", 0.0);
      grammar.corruption.num_surrogates = corr.value("num_surrogates", 2);
      grammar.corruption.speaker_conditioned = corr.value("speaker_conditioned", false);
    }
    grammar.validate();
    return grammar;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("malformed grammar document: ") + e.what());
  }
}

ToyGrammar default_toy_grammar() {
  // Five determiners give every scene at least beam-width strong expansions
  // per step, and four-word templates give BLEU-4 something to measure.
  ToyGrammar grammar;
  grammar.lexicon = {
      {"a", {2, 3}},          {"the", {24, 3}},     {"one", {25, 3}},
      {"some", {26, 3}},      {"that", {27, 3}},    {"dog", {4, 5, 6}},
      {"cat", {9, 10, 11}},   {"bus", {14, 15, 16}}, {"girl", {19, 20, 21}},
      {"runs", {7, 8}},       {"sits", {12, 13}},   {"stops", {17, 18}},
      {"smiles", {22, 23}},   {"fast", {30, 31}},   {"down", {32, 33}},
      {"loud", {34, 35}},     {"wide", {36, 37}},
  };
  const std::vector<std::string> determiners{"a", "the", "one", "some", "that"};
  const std::vector<double> det_weights{0.30, 0.25, 0.20, 0.15, 0.10};
  auto scene = [&](std::string id, std::string noun, std::string verb, std::string adv) {
    SceneSpec out;
    out.id = std::move(id);
    for (std::size_t d = 0; d < determiners.size(); ++d) {
      out.templates.push_back({{determiners[d], noun, verb, adv}, det_weights[d]});
    }
    return out;
  };
  grammar.scenes = {
      scene("scene_dog", "dog", "runs", "fast"),
      scene("scene_cat", "cat", "sits", "down"),
      scene("scene_bus", "bus", "stops", "loud"),
      scene("scene_girl", "girl", "smiles", "wide"),
  };
  grammar.duration_max = 4;
  grammar.corruption = CorruptionSpec{1.0, 2, false};
  grammar.validate();
  return grammar;
}

LexiconRenderer::LexiconRenderer(const ToyGrammar& grammar) {
  for (const auto& [word, units] : grammar.lexicon) {
    by_units_[units] = word;
    max_len_ = std::max(max_len_, units.size());
  }
}

LexiconRenderer::Rendering LexiconRenderer::render(const std::vector<int>& units) const {
  // the synthesis leg consumes run-length encoded units, so collapse first
  std::vector<int> collapsed;
  collapsed.reserve(units.size());
  for (int unit : units) {
    if (collapsed.empty() || collapsed.back() != unit) collapsed.push_back(unit);
  }

  Rendering out;
  std::size_t pos = 0;
  std::vector<int> probe;
  while (pos < collapsed.size()) {
    std::size_t matched = 0;
    std::size_t limit = std::min(max_len_, collapsed.size() - pos);
    for (std::size_t len = limit; len >= 1; --len) {
      probe.assign(collapsed.begin() + static_cast<long>(pos),
                   collapsed.begin() + static_cast<long>(pos + len));
      auto it = by_units_.find(probe);
      if (it != by_units_.end()) {
        out.words.push_back(it->second);
        matched = len;
        break;
      }
    }
    if (matched == 0) {
      out.skipped_units += 1;
      pos += 1;
    } else {
      out.matched_units += matched;
      pos += matched;
    }
  }
  return out;
}

std::vector<GeneratedUtterance> generate_corpus(const ToyGrammar& grammar,
                                                const CorruptionSpec& corruption,
                                                int n_per_context, bool with_durations,
                                                std::uint64_t seed) {
  if (n_per_context < 1) {
    fail(Errc::InvalidArgument, "generate_corpus: n_per_context must be >= 1");
  }
  grammar.validate();

  // split decisions and surrogate id ranges are fixed per unit type
  std::set<int> unit_types;
  for (const auto& [word, units] : grammar.lexicon) {
    unit_types.insert(units.begin(), units.end());
  }
  int surrogate_base = (unit_types.empty() ? 0 : *unit_types.rbegin()) + 1;
  std::map<int, std::vector<int>> surrogates;
  Rng table_rng = rng_stream(seed, "corruption-table");
  for (int unit : unit_types) {
    if (corruption.split_prob > 0.0 && table_rng.next_double() < corruption.split_prob) {
      std::vector<int> ids;
      for (int j = 0; j < corruption.num_surrogates; ++j) ids.push_back(surrogate_base++);
      surrogates[unit] = std::move(ids);
    } else {
      surrogates[unit] = {unit};
    }
  }

  std::vector<GeneratedUtterance> corpus;
  corpus.reserve(grammar.scenes.size() * static_cast<std::size_t>(n_per_context));
  for (const SceneSpec& scene : grammar.scenes) {
    std::vector<double> weights;
    weights.reserve(scene.templates.size());
    for (const CaptionTemplate& tpl : scene.templates) weights.push_back(tpl.weight);

    for (int index = 0; index < n_per_context; ++index) {
      Rng rng = rng_stream(seed, scene.id, static_cast<std::uint64_t>(index));
      const CaptionTemplate& tpl = scene.templates[rng.pick_weighted(weights)];
      const std::string& speaker =
          grammar.speakers[static_cast<std::size_t>(rng.next_int(0, static_cast<int>(grammar.speakers.size()) - 1))];

      GeneratedUtterance utt;
      utt.context = scene.id;
      utt.speaker = speaker;
      utt.gold_words = tpl.words;
      utt.frames.frame_shift_ms = grammar.frame_shift_ms;

      for (int unit : template_units(grammar, tpl)) {
        int duration = with_durations ? rng.next_int(1, grammar.duration_max) : 1;
        const std::vector<int>& ids = surrogates.at(unit);
        for (int frame = 0; frame < duration; ++frame) {
          int emitted = unit;
          if (ids.size() > 1) {
            if (corruption.speaker_conditioned) {
              Rng fixed = rng_stream(seed, "speaker-surrogate/" + speaker, static_cast<std::uint64_t>(unit));
              emitted = ids[static_cast<std::size_t>(fixed.next_int(0, static_cast<int>(ids.size()) - 1))];
            } else {
              emitted = ids[static_cast<std::size_t>(rng.next_int(0, static_cast<int>(ids.size()) - 1))];
            }
          }
          utt.frames.tokens.push_back(emitted);
        }
      }
      corpus.push_back(std::move(utt));
    }
  }
  return corpus;
}

const char* condition_name(CascadeCondition condition) {
  switch (condition) {
    case CascadeCondition::rle_clean: return "rle_clean";
    case CascadeCondition::rle_corrupt: return "rle_corrupt";
    case CascadeCondition::norle_clean: return "norle_clean";
  }
  return "rle_clean";
}

std::optional<CascadeCondition> condition_from_name(std::string_view name) {
  if (name == "rle_clean") return CascadeCondition::rle_clean;
  if (name == "rle_corrupt") return CascadeCondition::rle_corrupt;
  if (name == "norle_clean") return CascadeCondition::norle_clean;
  return std::nullopt;
}

namespace {

std::vector<int> symbols_to_units(const TokenSeq& symbols) {
  std::vector<int> units;
  units.reserve(symbols.size());
  for (const Token& symbol : symbols) {
    units.push_back(std::stoi(symbol));
  }
  return units;
}

MethodOutcome score_outputs(const std::string& method, const ToyGrammar& grammar,
                            const LexiconRenderer& renderer, const NgramModel& model,
                            const std::vector<std::pair<std::string, Hypothesis>>& outputs) {
  MethodOutcome outcome;
  outcome.method = method;

  // references per scene: every template's word sequence / unigram bag
  std::map<std::string, std::vector<TokenSeq>> word_refs;
  std::map<std::string, PropositionBag> prop_refs;
  for (const SceneSpec& scene : grammar.scenes) {
    std::vector<PropositionBag> bags;
    for (const CaptionTemplate& tpl : scene.templates) {
      word_refs[scene.id].push_back(tpl.words);
      bags.push_back(unigram_bag(tpl.words));
    }
    prop_refs[scene.id] = union_refs(bags);
  }

  std::vector<EvalInstance> instances;
  double spice_sum = 0.0;
  std::size_t looping = 0;
  for (const auto& [context, hyp] : outputs) {
    LoopReport loop = detect_loops(model, hyp);
    if (loop.looping) ++looping;

    auto rendering = renderer.render(symbols_to_units(model.tokens_to_symbols(hyp.tokens)));
    instances.push_back(EvalInstance{context, rendering.words, word_refs.at(context)});
    spice_sum += spice_f1(prop_refs.at(context), unigram_bag(rendering.words));
    outcome.contexts.push_back(context);
    outcome.rendered.push_back(rendering.words);
  }

  outcome.loop_rate = outputs.empty() ? 0.0 : static_cast<double>(looping) / outputs.size();
  outcome.word_bleu4 = instances.empty() ? 0.0 : bleu4(instances);
  outcome.spice_f1 = outputs.empty() ? 0.0 : spice_sum / static_cast<double>(outputs.size());
  return outcome;
}

}  // namespace

const MethodOutcome& CascadeReport::outcome(CascadeCondition condition,
                                            const std::string& method) const {
  for (const ConditionOutcome& cond : conditions) {
    if (cond.condition != condition) continue;
    for (const MethodOutcome& out : cond.methods) {
      if (out.method == method) return out;
    }
  }
  fail(Errc::InvalidArgument, std::string("no outcome for ") + condition_name(condition) + "/" + method);
}

std::vector<CurvePoint> CascadeReport::to_points() const {
  std::vector<CurvePoint> points;
  for (const ConditionOutcome& cond : conditions) {
    std::string base = condition_name(cond.condition);
    points.push_back({base, 1, "mean_entropy", cond.mean_entropy});
    for (const MethodOutcome& method : cond.methods) {
      std::string label = base + "/" + method.method;
      points.push_back({label, 1, "loop_rate", method.loop_rate});
      points.push_back({label, 1, "bleu4", method.word_bleu4});
      points.push_back({label, 1, "spice", method.spice_f1});
    }
  }
  return points;
}

CascadeReport run_cascade_experiment(const ToyGrammar& grammar,
                                     const std::vector<CascadeCondition>& conditions,
                                     const CascadeConfig& config, std::uint64_t seed) {
  grammar.validate();
  if (conditions.empty()) {
    fail(Errc::InvalidArgument, "run_cascade_experiment: no conditions");
  }

  LexiconRenderer renderer(grammar);
  CascadeReport report;

  for (CascadeCondition condition : conditions) {
    bool rle = condition != CascadeCondition::norle_clean;
    CorruptionSpec corruption;  // no splits by default
    if (condition == CascadeCondition::rle_corrupt) corruption = grammar.corruption;

    std::vector<GeneratedUtterance> corpus =
        generate_corpus(grammar, corruption, config.n_per_context, true, seed);

    std::vector<TrainingPair> pairs;
    pairs.reserve(corpus.size());
    for (const GeneratedUtterance& utt : corpus) {
      std::vector<int> units =
          rle ? rle_encode(utt.frames, false).tokens() : utt.frames.tokens;
      pairs.emplace_back(utt.context, units_to_tokens(units));
    }

    ConditionOutcome outcome;
    outcome.condition = condition;
    outcome.model = NgramModel::fit(pairs, config.order, config.alpha,
                                    rle ? config.max_len_rle : config.max_len_frames);
    outcome.mean_entropy = mean_step_entropy(outcome.model, pairs);

    std::vector<std::pair<std::string, Hypothesis>> beam_outputs;
    std::vector<std::pair<std::string, Hypothesis>> sample_outputs;
    for (const SceneSpec& scene : grammar.scenes) {
      std::vector<Hypothesis> beam =
          beam_search(outcome.model, scene.id, config.beam_size, 1);
      beam_outputs.emplace_back(scene.id, beam.front());
      for (Hypothesis& hyp : sample_decode(outcome.model, scene.id, config.sample_temperature,
                                           config.sample_top_k, config.n_samples, seed)) {
        sample_outputs.emplace_back(scene.id, std::move(hyp));
      }
    }

    outcome.methods.push_back(
        score_outputs("beam", grammar, renderer, outcome.model, beam_outputs));
    outcome.methods.push_back(
        score_outputs("sample", grammar, renderer, outcome.model, sample_outputs));
    report.conditions.push_back(std::move(outcome));
  }
  return report;
}

}  // namespace segcap

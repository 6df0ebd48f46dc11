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

#include "segcap/decoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "segcap/random.hpp"

namespace segcap {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_normalized(const SequenceModel& model, const std::vector<double>& logprobs) {
  if (logprobs.size() != model.vocab().size()) {
    fail(Errc::ModelContract, "next_logprobs returned wrong vector length");
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < logprobs.size(); ++i) {
    double lp = logprobs[i];
    if (std::isnan(lp)) fail(Errc::ModelContract, "next_logprobs returned NaN");
    if (lp == kNegInf) continue;
    mass += std::exp(lp);
  }
  if (std::abs(mass - 1.0) > 1e-9) {
    fail(Errc::ModelContract,
         "next_logprobs mass " + std::to_string(mass) + " deviates from 1");
  }
}

std::vector<double> step_logprobs(const SequenceModel& model, const std::string& context,
                                  std::span<const int> prefix) {
  std::vector<double> lp = model.next_logprobs(context, prefix);
  check_normalized(model, lp);
  return lp;
}

int argmax_token(const std::vector<double>& logprobs) {
  int best = ModelVocab::kEos;
  double best_lp = kNegInf;
  for (int i = ModelVocab::kEos; i < static_cast<int>(logprobs.size()); ++i) {
    if (logprobs[static_cast<std::size_t>(i)] > best_lp) {
      best_lp = logprobs[static_cast<std::size_t>(i)];
      best = i;
    }
  }
  return best;
}

bool better_hypothesis(const Hypothesis& a, const Hypothesis& b) {
  if (a.logprob != b.logprob) return a.logprob > b.logprob;
  return a.tokens < b.tokens;
}

}  // namespace

ModelVocab ModelVocab::from_symbols(std::vector<std::string> content_symbols) {
  ModelVocab out;
  out.symbols_.reserve(content_symbols.size() + 2);
  for (std::string& symbol : content_symbols) {
    if (symbol == kBosSymbol || symbol == kEosSymbol) {
      fail(Errc::InvalidArgument, "vocabulary symbol collides with reserved marker: " + symbol);
    }
    out.symbols_.push_back(std::move(symbol));
  }
  for (std::size_t i = 0; i < out.symbols_.size(); ++i) {
    if (!out.index_.emplace(out.symbols_[i], static_cast<int>(i)).second) {
      fail(Errc::InvalidArgument, "duplicate vocabulary symbol: " + out.symbols_[i]);
    }
  }
  return out;
}

std::optional<int> ModelVocab::index_of(const std::string& symbol) const {
  auto it = index_.find(symbol);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& ModelVocab::symbol(int index) const {
  if (index < 0 || index >= static_cast<int>(symbols_.size())) {
    fail(Errc::InvalidArgument, "vocabulary index out of range");
  }
  return symbols_[static_cast<std::size_t>(index)];
}

std::vector<std::string> ModelVocab::content_symbols() const {
  return std::vector<std::string>(symbols_.begin() + 2, symbols_.end());
}

Hypothesis greedy_decode(const SequenceModel& model, const std::string& context) {
  Hypothesis hyp;
  for (int step = 0; step < model.max_len(); ++step) {
    std::vector<double> lp = step_logprobs(model, context, hyp.tokens);
    int token = argmax_token(lp);
    hyp.logprob += lp[static_cast<std::size_t>(token)];
    if (token == ModelVocab::kEos) {
      hyp.terminated = true;
      return hyp;
    }
    hyp.tokens.push_back(token);
  }
  return hyp;
}

std::vector<Hypothesis> beam_search(const SequenceModel& model, const std::string& context,
                                    int beam_size, int n_out, double length_norm) {
  if (beam_size < 1) fail(Errc::InvalidArgument, "beam_size must be >= 1");
  if (n_out < 1 || n_out > beam_size) {
    fail(Errc::InvalidArgument, "n_out must be in [1, beam_size]");
  }
  if (length_norm < 0.0) fail(Errc::InvalidArgument, "length_norm must be >= 0");

  std::vector<Hypothesis> active{Hypothesis{}};
  std::vector<Hypothesis> finished;

  for (int step = 0; step < model.max_len() && !active.empty(); ++step) {
    // EOS competes with content tokens for beam slots: a hypothesis is
    // harvested into the finished pool only when its termination ranks
    // within the top beam_size expansions of this step.
    std::vector<Hypothesis> expansions;
    expansions.reserve(active.size() * model.vocab().size());
    for (const Hypothesis& hyp : active) {
      std::vector<double> lp = step_logprobs(model, context, hyp.tokens);
      for (int token = ModelVocab::kEos; token < static_cast<int>(lp.size()); ++token) {
        double score = hyp.logprob + lp[static_cast<std::size_t>(token)];
        if (score == kNegInf) continue;  // zero-probability path
        Hypothesis next{hyp.tokens, score, token == ModelVocab::kEos};
        if (token != ModelVocab::kEos) next.tokens.push_back(token);
        expansions.push_back(std::move(next));
      }
    }
    std::sort(expansions.begin(), expansions.end(), better_hypothesis);

    std::vector<Hypothesis> survivors;
    int slots = 0;
    for (Hypothesis& hyp : expansions) {
      if (slots >= beam_size) break;
      ++slots;
      if (hyp.terminated) {
        finished.push_back(std::move(hyp));
      } else {
        survivors.push_back(std::move(hyp));
      }
    }
    active = std::move(survivors);
  }

  auto rank = [length_norm](const Hypothesis& a, const Hypothesis& b) {
    if (length_norm > 0.0) {
      auto normalized = [length_norm](const Hypothesis& hyp) {
        double length = static_cast<double>(hyp.tokens.size());
        return hyp.logprob / std::pow(std::max(1.0, length), length_norm);
      };
      double na = normalized(a), nb = normalized(b);
      if (na != nb) return na > nb;
      return a.tokens < b.tokens;
    }
    return better_hypothesis(a, b);
  };

  std::sort(finished.begin(), finished.end(), rank);
  std::vector<Hypothesis> out;
  for (const Hypothesis& hyp : finished) {
    if (static_cast<int>(out.size()) >= n_out) break;
    out.push_back(hyp);
  }
  // fall back to unfinished survivors truncated at max_len
  std::sort(active.begin(), active.end(), rank);
  for (const Hypothesis& hyp : active) {
    if (static_cast<int>(out.size()) >= n_out) break;
    out.push_back(hyp);
  }
  return out;
}

int default_max_len(Domain domain) {
  switch (domain) {
    case Domain::word: return 18;
    case Domain::character: return 70;
    case Domain::unit: return 100;
  }
  return 100;
}

std::vector<Hypothesis> sample_decode(const SequenceModel& model, const std::string& context,
                                      double temperature, int top_k, int n_out,
                                      std::uint64_t seed) {
  if (temperature < 0.0) fail(Errc::InvalidArgument, "temperature must be >= 0");
  if (top_k < 0) fail(Errc::InvalidArgument, "top_k must be >= 1, or 0 for all");
  if (n_out < 1) fail(Errc::InvalidArgument, "n_out must be >= 1");

  std::vector<Hypothesis> out(static_cast<std::size_t>(n_out));
  for (int index = 0; index < n_out; ++index) {
    Rng rng = rng_stream(seed, context, static_cast<std::uint64_t>(index));
    Hypothesis hyp;
    for (int step = 0; step < model.max_len(); ++step) {
      std::vector<double> lp = step_logprobs(model, context, hyp.tokens);
      int token;
      if (temperature == 0.0) {
        token = argmax_token(lp);
      } else {
        // temperature first, then truncation, then renormalization
        std::vector<std::pair<double, int>> scaled;
        scaled.reserve(lp.size());
        for (int i = ModelVocab::kEos; i < static_cast<int>(lp.size()); ++i) {
          double s = lp[static_cast<std::size_t>(i)];
          if (s == kNegInf) continue;
          scaled.emplace_back(s / temperature, i);
        }
        std::sort(scaled.begin(), scaled.end(), [](const auto& a, const auto& b) {
          if (a.first != b.first) return a.first > b.first;
          return a.second < b.second;
        });
        if (top_k > 0 && static_cast<int>(scaled.size()) > top_k) {
          scaled.resize(static_cast<std::size_t>(top_k));
        }
        double max_scaled = scaled.front().first;
        double mass = 0.0;
        for (const auto& [s, i] : scaled) mass += std::exp(s - max_scaled);
        double u = rng.next_double() * mass;
        double acc = 0.0;
        token = scaled.back().second;
        for (const auto& [s, i] : scaled) {
          acc += std::exp(s - max_scaled);
          if (u < acc) {
            token = i;
            break;
          }
        }
      }
      hyp.logprob += lp[static_cast<std::size_t>(token)];
      if (token == ModelVocab::kEos) {
        hyp.terminated = true;
        break;
      }
      hyp.tokens.push_back(token);
    }
    out[static_cast<std::size_t>(index)] = std::move(hyp);
  }
  return out;
}

namespace {

void brute_force_visit(const SequenceModel& model, const std::string& context,
                       std::vector<int>& prefix, double score, int max_len, Hypothesis& best,
                       bool& found) {
  std::vector<double> lp = step_logprobs(model, context, prefix);
  double eos_score = score + lp[ModelVocab::kEos];
  Hypothesis candidate{prefix, eos_score, true};
  if (!found || better_hypothesis(candidate, best)) {
    best = std::move(candidate);
    found = true;
  }
  if (static_cast<int>(prefix.size()) >= max_len) return;
  for (int token = ModelVocab::kEos + 1; token < static_cast<int>(lp.size()); ++token) {
    double next = score + lp[static_cast<std::size_t>(token)];
    if (found && next < best.logprob) continue;  // extensions only lose mass
    prefix.push_back(token);
    brute_force_visit(model, context, prefix, next, max_len, best, found);
    prefix.pop_back();
  }
}

}  // namespace

Hypothesis brute_force_mode(const SequenceModel& model, const std::string& context, int max_len) {
  double content = static_cast<double>(model.vocab().content_size());
  double nodes = 1.0, layer = 1.0;
  for (int l = 1; l <= max_len; ++l) {
    layer *= content;
    nodes += layer;
    if (nodes > 1e7) {
      fail(Errc::TooLarge, "brute_force_mode: search space exceeds 1e7 sequences");
    }
  }

  Hypothesis best;
  bool found = false;
  std::vector<int> prefix;
  brute_force_visit(model, context, prefix, 0.0, max_len, best, found);
  return best;
}

double rescore(const SequenceModel& model, const std::string& context, const Hypothesis& hyp) {
  double total = 0.0;
  std::vector<int> prefix;
  prefix.reserve(hyp.tokens.size());
  for (int token : hyp.tokens) {
    std::vector<double> lp = step_logprobs(model, context, prefix);
    total += lp[static_cast<std::size_t>(token)];
    prefix.push_back(token);
  }
  if (hyp.terminated) {
    std::vector<double> lp = step_logprobs(model, context, prefix);
    total += lp[ModelVocab::kEos];
  }
  return total;
}

LoopReport detect_loops(std::span<const int> seq, int min_reps, int max_period) {
  return detect_loops_seq<int>(seq, min_reps, max_period);
}

LoopReport detect_loops(const TokenSeq& seq, int min_reps, int max_period) {
  return detect_loops_seq<Token>(std::span<const Token>(seq.data(), seq.size()), min_reps,
                                 max_period);
}

LoopReport detect_loops(const SequenceModel& model, const Hypothesis& hyp, int min_reps,
                        int max_period) {
  LoopReport report = detect_loops(std::span<const int>(hyp.tokens.data(), hyp.tokens.size()),
                                   min_reps, max_period);
  report.truncated_at_max_len = hyp.truncated_at_max_len(model);
  return report;
}

}  // namespace segcap

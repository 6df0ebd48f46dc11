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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "segcap/decoding.hpp"
#include "segcap/ngram_model.hpp"
#include "support/oracles.hpp"
#include "support/toy_models.hpp"

using namespace segcap;

namespace {

// content symbols are s0=2, s1=3, s2=4 in vocabulary indices
toy::MarkovModel deterministic_chain() {
  // BOS -> s0 -> s1 -> s2 -> EOS, each step probability 1
  return toy::MarkovModel(
      {
          {0.0, 1.0, 0.0, 0.0},  // BOS row: s0
          {0.0, 0.0, 1.0, 0.0},  // after s0: s1
          {0.0, 0.0, 0.0, 1.0},  // after s1: s2
          {1.0, 0.0, 0.0, 0.0},  // after s2: EOS
      },
      10);
}

toy::MarkovModel looping_grammar(int max_len) {
  // the s0<->s1 bigram carries the highest stepwise mass and EOS mass is
  // tiny, mirroring an add-alpha smoothed table over a wide unit inventory;
  // filler symbols keep every beam slot busier than the EOS expansion
  auto row = [](double eos, double s0, double s1) {
    std::vector<double> out{eos, s0, s1};
    for (int i = 0; i < 4; ++i) out.push_back(0.005);
    return out;
  };
  return toy::MarkovModel(
      {
          row(1e-6, 0.9, 0.08),   // BOS: mostly s0
          row(1e-6, 0.02, 0.9),   // after s0: mostly s1
          row(1e-6, 0.9, 0.02),   // after s1: mostly s0
          row(1e-6, 0.2, 0.2),    // filler rows, rarely reached
          row(1e-6, 0.2, 0.2),
          row(1e-6, 0.2, 0.2),
          row(1e-6, 0.2, 0.2),
      },
      max_len);
}

std::vector<int> tokens(std::initializer_list<int> list) { return std::vector<int>(list); }

}  // namespace

TEST_CASE("greedy follows a deterministic model exactly") {
  toy::MarkovModel model = deterministic_chain();
  Hypothesis hyp = greedy_decode(model, "ctx");
  CHECK(hyp.tokens == tokens({2, 3, 4}));
  CHECK(hyp.terminated);
  CHECK(hyp.logprob == doctest::Approx(0.0));
}

TEST_CASE("greedy follows the hand-enumerated argmax path") {
  // BOS: s1 wins (0.5); after s1: s0 wins (0.6); after s0: EOS wins (0.7)
  toy::MarkovModel model(
      {
          {0.1, 0.4, 0.5},
          {0.7, 0.1, 0.2},
          {0.1, 0.6, 0.3},
      },
      10);
  Hypothesis hyp = greedy_decode(model, "ctx");
  CHECK(hyp.tokens == tokens({3, 2}));
  CHECK(hyp.terminated);
  CHECK(hyp.logprob == doctest::Approx(std::log(0.5) + std::log(0.6) + std::log(0.7)));
}

TEST_CASE("greedy truncates when argmax never reaches EOS") {
  toy::MarkovModel model(
      {
          {0.01, 0.99},  // single content symbol, repeat mass dominates
          {0.01, 0.99},
      },
      8);
  Hypothesis hyp = greedy_decode(model, "ctx");
  CHECK_FALSE(hyp.terminated);
  CHECK(hyp.tokens.size() == 8);
  CHECK(hyp.truncated_at_max_len(model));
}

TEST_CASE("decoders verify the normalization contract") {
  struct BrokenModel : SequenceModel {
    ModelVocab vocab_ = ModelVocab::from_symbols({"x", "y"});
    const ModelVocab& vocab() const override { return vocab_; }
    int max_len() const override { return 4; }
    std::vector<double> next_logprobs(const std::string&, std::span<const int>) const override {
      return {-std::numeric_limits<double>::infinity(), std::log(0.4), std::log(0.4),
              std::log(0.4)};  // mass 1.2
    }
  } broken;
  try {
    greedy_decode(broken, "ctx");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ModelContract);
  }
  CHECK_THROWS_AS(beam_search(broken, "ctx", 2), Error);
  CHECK_THROWS_AS(sample_decode(broken, "ctx", 1.0, 0, 1, 7), Error);
}

TEST_CASE("beam with beam_size 1 equals greedy token for token") {
  Rng rng(424242);
  for (int trial = 0; trial < 40; ++trial) {
    toy::MarkovModel model = toy::random_markov(rng, rng.next_int(2, 6), rng.next_int(3, 6));
    Hypothesis greedy = greedy_decode(model, "ctx");
    std::vector<Hypothesis> beam = beam_search(model, "ctx", 1, 1);
    REQUIRE(beam.size() == 1);
    CHECK(beam.front().tokens == greedy.tokens);
    CHECK(beam.front().terminated == greedy.terminated);
    CHECK(beam.front().logprob == doctest::Approx(greedy.logprob).epsilon(1e-12));
  }
}

TEST_CASE("beam with beam_size 8 finds the brute-force mode on toy tables") {
  Rng rng(55555);
  for (int trial = 0; trial < 30; ++trial) {
    toy::MarkovModel model = toy::random_markov(rng, rng.next_int(3, 6), rng.next_int(4, 6));
    Hypothesis mode = brute_force_mode(model, "ctx", model.max_len());
    std::vector<Hypothesis> beam = beam_search(model, "ctx", 8, 1);
    REQUIRE(!beam.empty());
    CHECK(beam.front().terminated);
    CHECK(beam.front().tokens == mode.tokens);
    CHECK(beam.front().logprob == doctest::Approx(mode.logprob).epsilon(1e-12));
  }
}

TEST_CASE("looping grammar drives the beam into a detected cycle") {
  toy::MarkovModel model = looping_grammar(24);
  std::vector<Hypothesis> beam = beam_search(model, "ctx", 5, 1);
  REQUIRE(!beam.empty());
  const Hypothesis& top = beam.front();
  CHECK_FALSE(top.terminated);
  CHECK(top.tokens.size() == 24);
  LoopReport report = detect_loops(model, top);
  CHECK(report.looping);
  CHECK(report.period == 2);
  CHECK(report.truncated_at_max_len);
  CHECK(report.loop_fraction > 0.9);
}

TEST_CASE("beam n_out returns sorted distinct-score hypotheses and validates") {
  Rng rng(99);
  toy::MarkovModel model = toy::random_markov(rng, 4, 5);
  std::vector<Hypothesis> beam = beam_search(model, "ctx", 8, 4);
  REQUIRE(beam.size() == 4);
  for (std::size_t i = 1; i < beam.size(); ++i) {
    CHECK(beam[i - 1].logprob >= beam[i].logprob);
  }
  CHECK_THROWS_AS(beam_search(model, "ctx", 2, 3), Error);  // n_out > beam_size
  CHECK_THROWS_AS(beam_search(model, "ctx", 0, 0), Error);
}

TEST_CASE("length normalization is off by default and re-ranks when enabled") {
  // the short path wins on total mass, the long chain wins per token;
  // normalization by length promotes the longer one
  toy::MarkovModel model(
      {
          {0.05, 0.25, 0.70},  // BOS
          {0.50, 0.25, 0.25},  // after s0: strongly EOS
          {0.10, 0.05, 0.85},  // after s1: mostly continue
      },
      4);
  std::vector<Hypothesis> plain = beam_search(model, "ctx", 8, 1);
  std::vector<Hypothesis> normalized = beam_search(model, "ctx", 8, 1, 1.0);
  REQUIRE(!plain.empty());
  REQUIRE(!normalized.empty());
  CHECK(plain.front().tokens == std::vector<int>{2});  // the short path wins unnormalized
  CHECK(normalized.front().tokens.size() > 1);
  // default behaviour matches an explicit zero
  std::vector<Hypothesis> zero = beam_search(model, "ctx", 8, 1, 0.0);
  CHECK(zero.front().tokens == plain.front().tokens);
}

TEST_CASE("decode length defaults per token domain") {
  CHECK(default_max_len(Domain::word) == 18);
  CHECK(default_max_len(Domain::character) == 70);
  CHECK(default_max_len(Domain::unit) == 100);
}

TEST_CASE("monotone beams: enlarging the beam never lowers the top finished score") {
  Rng rng(123321);
  int comparisons = 0;
  for (int trial = 0; trial < 25; ++trial) {
    toy::MarkovModel model = toy::random_markov(rng, rng.next_int(3, 6), rng.next_int(4, 6), 0.10);
    double previous = -std::numeric_limits<double>::infinity();
    for (int beam_size : {1, 2, 4, 8}) {
      std::vector<Hypothesis> beam = beam_search(model, "ctx", beam_size, 1);
      REQUIRE(!beam.empty());
      if (!beam.front().terminated) continue;  // no finished pool at this width
      if (std::isfinite(previous)) {
        CHECK(beam.front().logprob >= previous - 1e-12);
        ++comparisons;
      }
      previous = beam.front().logprob;
    }
  }
  CHECK(comparisons > 40);  // the property was actually exercised
}

TEST_CASE("brute force matches an independent enumeration on random models") {
  Rng rng(314159);
  for (int trial = 0; trial < 20; ++trial) {
    toy::MarkovModel model = toy::random_markov(rng, 4, 5);
    Hypothesis fast = brute_force_mode(model, "ctx", 5);
    Hypothesis slow = toy::enumerate_mode_oracle(model, "ctx", 5);
    CHECK(fast.tokens == slow.tokens);
    CHECK(fast.logprob == doctest::Approx(slow.logprob).epsilon(1e-12));
  }
}

TEST_CASE("brute force prefers a short high-mass termination") {
  // a single step to EOS carries 0.6; every longer path is worth less
  toy::MarkovModel model(
      {
          {0.1, 0.6, 0.3},
          {0.6, 0.2, 0.2},
          {0.5, 0.25, 0.25},
      },
      6);
  Hypothesis mode = brute_force_mode(model, "ctx", 6);
  CHECK(mode.tokens == tokens({2}));
  CHECK(mode.terminated);
  CHECK(mode.logprob == doctest::Approx(std::log(0.6) + std::log(0.6)));
}

TEST_CASE("brute force guards its search space") {
  Rng rng(1);
  toy::MarkovModel model = toy::random_markov(rng, 6, 30);
  try {
    brute_force_mode(model, "ctx", 30);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TooLarge);
  }
}

TEST_CASE("deterministic model decodes to its unique path in every mode") {
  toy::MarkovModel model = deterministic_chain();
  Hypothesis mode = brute_force_mode(model, "ctx", 10);
  CHECK(mode.tokens == tokens({2, 3, 4}));
  std::vector<Hypothesis> sampled = sample_decode(model, "ctx", 1.0, 0, 3, 9);
  for (const Hypothesis& hyp : sampled) {
    CHECK(hyp.tokens == tokens({2, 3, 4}));
    CHECK(hyp.terminated);
  }
}

TEST_CASE("top_k of 1 reduces sampling to greedy for any temperature") {
  Rng rng(777);
  for (double temperature : {0.1, 0.7, 1.0, 2.5}) {
    toy::MarkovModel model = toy::random_markov(rng, 5, 6);
    Hypothesis greedy = greedy_decode(model, "ctx");
    for (const Hypothesis& hyp : sample_decode(model, "ctx", temperature, 1, 3, 13)) {
      CHECK(hyp.tokens == greedy.tokens);
      CHECK(hyp.logprob == doctest::Approx(greedy.logprob).epsilon(1e-12));
    }
  }
}

TEST_CASE("temperature zero is treated as argmax") {
  Rng rng(778);
  toy::MarkovModel model = toy::random_markov(rng, 5, 6);
  Hypothesis greedy = greedy_decode(model, "ctx");
  for (const Hypothesis& hyp : sample_decode(model, "ctx", 0.0, 0, 2, 5)) {
    CHECK(hyp.tokens == greedy.tokens);
  }
}

TEST_CASE("sampled next-token frequencies match the model distribution") {
  // fixed step distribution over 8 symbols; every sequence is one token long
  std::vector<double> probs{0.30, 0.20, 0.15, 0.12, 0.10, 0.06, 0.04, 0.03};
  std::vector<std::vector<double>> rows;
  rows.push_back([&] {
    std::vector<double> row{0.0};
    for (double p : probs) row.push_back(p);
    return row;
  }());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    std::vector<double> row(probs.size() + 1, 0.0);
    row[0] = 1.0;  // EOS immediately after the first token
    rows.push_back(row);
  }
  toy::MarkovModel model(rows, 1);

  const int draws = 50000;
  std::vector<Hypothesis> samples = sample_decode(model, "chi", 1.0, 0, draws, 20260808);
  std::vector<int> counts(probs.size(), 0);
  for (const Hypothesis& hyp : samples) {
    REQUIRE(hyp.tokens.size() == 1);
    counts[static_cast<std::size_t>(hyp.tokens[0] - 2)]++;
  }
  double statistic = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    double expected = probs[i] * draws;
    statistic += (counts[i] - expected) * (counts[i] - expected) / expected;
  }
  double p_value = oracle::chi_square_pvalue(statistic, static_cast<int>(probs.size()) - 1);
  CHECK(p_value > 0.001);
}

TEST_CASE("top_k truncation restricts support to the k most probable symbols") {
  std::vector<double> probs{0.22, 0.20, 0.15, 0.13, 0.10, 0.08, 0.05, 0.03, 0.025, 0.015};
  std::vector<std::vector<double>> rows;
  rows.push_back([&] {
    std::vector<double> row{0.0};
    for (double p : probs) row.push_back(p);
    return row;
  }());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    std::vector<double> row(probs.size() + 1, 0.0);
    row[0] = 1.0;
    rows.push_back(row);
  }
  toy::MarkovModel model(rows, 1);

  std::set<int> support;
  for (const Hypothesis& hyp : sample_decode(model, "ctx", 0.7, 5, 10000, 31337)) {
    REQUIRE(hyp.tokens.size() == 1);
    support.insert(hyp.tokens[0]);
  }
  // the five most probable symbols are vocabulary indices 2..6
  CHECK(support == std::set<int>{2, 3, 4, 5, 6});
}

TEST_CASE("sampling is determined by (seed, context, index) alone") {
  Rng rng(31);
  toy::MarkovModel model = toy::random_markov(rng, 5, 8);

  std::vector<Hypothesis> first = sample_decode(model, "ctx_a", 0.9, 3, 5, 99);
  std::vector<Hypothesis> second = sample_decode(model, "ctx_a", 0.9, 3, 5, 99);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].tokens == second[i].tokens);
  }

  // a different context or seed moves the stream
  std::vector<Hypothesis> other_ctx = sample_decode(model, "ctx_b", 0.9, 3, 5, 99);
  std::vector<Hypothesis> other_seed = sample_decode(model, "ctx_a", 0.9, 3, 5, 100);
  bool ctx_differs = false, seed_differs = false;
  for (std::size_t i = 0; i < first.size(); ++i) {
    ctx_differs = ctx_differs || other_ctx[i].tokens != first[i].tokens;
    seed_differs = seed_differs || other_seed[i].tokens != first[i].tokens;
  }
  CHECK(ctx_differs);
  CHECK(seed_differs);

  // drawing a superset leaves earlier indices untouched
  std::vector<Hypothesis> extended = sample_decode(model, "ctx_a", 0.9, 3, 8, 99);
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(extended[i].tokens == first[i].tokens);
  }
}

TEST_CASE("rescoring reproduces every decoder's logprob") {
  Rng rng(404);
  for (int trial = 0; trial < 10; ++trial) {
    toy::MarkovModel model = toy::random_markov(rng, 5, 6);
    std::vector<Hypothesis> hyps;
    hyps.push_back(greedy_decode(model, "ctx"));
    for (Hypothesis& hyp : beam_search(model, "ctx", 5, 3)) hyps.push_back(std::move(hyp));
    for (Hypothesis& hyp : sample_decode(model, "ctx", 0.8, 4, 3, 11)) {
      hyps.push_back(std::move(hyp));
    }
    hyps.push_back(brute_force_mode(model, "ctx", 6));
    for (const Hypothesis& hyp : hyps) {
      CHECK(rescore(model, "ctx", hyp) == doctest::Approx(hyp.logprob).epsilon(1e-9));
      CHECK(hyp.logprob <= 1e-12);
    }
  }
}

TEST_CASE("brute-force mode upper-bounds terminated beam outputs") {
  Rng rng(606);
  for (int trial = 0; trial < 20; ++trial) {
    toy::MarkovModel model = toy::random_markov(rng, 4, 5, 0.10);
    Hypothesis mode = brute_force_mode(model, "ctx", 5);
    for (int beam_size : {1, 2, 3, 5, 8}) {
      std::vector<Hypothesis> beam = beam_search(model, "ctx", beam_size, 1);
      REQUIRE(!beam.empty());
      if (beam.front().terminated) {
        CHECK(mode.logprob >= beam.front().logprob - 1e-12);
      }
    }
  }
}

// --- loop detection -----------------------------------------------------------

TEST_CASE("loop detection on characteristic decoder outputs") {
  SUBCASE("bigram cycle is flagged with period 2") {
    std::vector<int> seq;
    for (int i = 0; i < 17; ++i) {
      seq.push_back(71);
      seq.push_back(791);
    }
    LoopReport report = detect_loops(std::span<const int>(seq.data(), seq.size()));
    CHECK(report.looping);
    CHECK(report.period == 2);
    CHECK(report.loop_fraction == doctest::Approx(1.0));
  }

  SUBCASE("constant tail is flagged with period 1") {
    std::vector<int> seq{263};
    for (int i = 0; i < 40; ++i) seq.push_back(32);
    LoopReport report = detect_loops(std::span<const int>(seq.data(), seq.size()));
    CHECK(report.looping);
    CHECK(report.period == 1);
    CHECK(report.loop_fraction == doctest::Approx(40.0 / 41.0));
  }

  SUBCASE("a healthy caption is not flagged") {
    std::vector<int> seq{
        263, 32,  208, 5,   336, 100, 717, 803, 256, 803, 815, 144, 120,  144, 654,
        936, 48,  417, 272, 417, 362, 766, 825, 284, 614, 156, 341, 135,  769, 5,
        208, 32,  208, 5,   336, 815, 144, 815, 494, 181, 467, 417, 870,  395, 683,
        141, 250, 543, 820, 587, 181, 913, 1013, 467, 5,  208, 32,  208,  5,   467,
        360, 606, 360, 801, 1009, 398, 847, 89,  100, 869, 254, 1003, 442, 42,  791,
        417, 272, 141, 766, 362, 614, 156, 341, 135, 769, 5,   208, 32};
    LoopReport report = detect_loops(std::span<const int>(seq.data(), seq.size()));
    CHECK_FALSE(report.looping);
    CHECK(report.period == 0);
  }
}

TEST_CASE("loop detector completeness on planted cycles") {
  Rng rng(271828);
  // independent naive oracle: smallest period whose whole-repetition suffix
  // reaches min_reps
  auto naive_period = [](const std::vector<int>& seq, int min_reps, int max_period) {
    for (int p = 1; p <= max_period; ++p) {
      int reps = 0;
      for (;;) {
        long start = static_cast<long>(seq.size()) - static_cast<long>(p) * (reps + 1);
        if (start < 0) break;
        bool equal = true;
        for (int k = 0; k < p; ++k) {
          if (seq[static_cast<std::size_t>(start + k)] !=
              seq[seq.size() - static_cast<std::size_t>(p) + static_cast<std::size_t>(k)]) {
            equal = false;
            break;
          }
        }
        if (!equal) break;
        ++reps;
      }
      if (reps >= min_reps) return p;
    }
    return 0;
  };

  for (int trial = 0; trial < 300; ++trial) {
    int period = rng.next_int(1, 8);
    std::vector<int> gram;
    for (int i = 0; i < period; ++i) gram.push_back(rng.next_int(0, 3));
    std::vector<int> seq;
    int prefix_len = rng.next_int(0, 6);
    for (int i = 0; i < prefix_len; ++i) seq.push_back(rng.next_int(0, 3));
    for (int rep = 0; rep < 3; ++rep) seq.insert(seq.end(), gram.begin(), gram.end());

    LoopReport report = detect_loops(std::span<const int>(seq.data(), seq.size()));
    CHECK(report.looping);
    CHECK(report.period == naive_period(seq, 3, 8));
  }
}

TEST_CASE("loop detection works on string tokens too") {
  TokenSeq seq{"go", "stop", "go", "stop", "go", "stop"};
  LoopReport report = detect_loops(seq);
  CHECK(report.looping);
  CHECK(report.period == 2);
}

// --- n-gram model ---------------------------------------------------------------

TEST_CASE("a near-zero alpha model reproduces its single training sequence") {
  std::vector<TrainingPair> corpus{{"ctx", {"u5", "u7", "u9", "u2"}}};
  NgramModel model = NgramModel::fit(corpus, 2, 1e-9, 20);
  Hypothesis hyp = greedy_decode(model, "ctx");
  CHECK(model.tokens_to_symbols(hyp.tokens) == TokenSeq{"u5", "u7", "u9", "u2"});
  CHECK(hyp.terminated);

  // a repeated token needs a longer history to stay unambiguous
  std::vector<TrainingPair> repeated{{"ctx", {"u5", "u7", "u5", "u9"}}};
  NgramModel trigram = NgramModel::fit(repeated, 3, 1e-9, 20);
  Hypothesis hyp3 = greedy_decode(trigram, "ctx");
  CHECK(trigram.tokens_to_symbols(hyp3.tokens) == TokenSeq{"u5", "u7", "u5", "u9"});
}

TEST_CASE("smoothed probabilities match hand-computed counts") {
  std::vector<TrainingPair> corpus{
      {"ctx", {"a", "b"}},
      {"ctx", {"a", "c"}},
      {"ctx", {"a", "b"}},
  };
  NgramModel model = NgramModel::fit(corpus, 2, 0.5, 10);
  // events: EOS + {a, b, c}, so K = 4
  auto prob = [&](std::span<const int> prefix, const std::string& symbol) {
    std::vector<double> lp = model.next_logprobs("ctx", prefix);
    int index = symbol == "</s>" ? ModelVocab::kEos : *model.vocab().index_of(symbol);
    return std::exp(lp[static_cast<std::size_t>(index)]);
  };
  CHECK(prob({}, "a") == doctest::Approx(3.5 / 5.0).epsilon(1e-12));       // (3+.5)/(3+2)
  CHECK(prob({}, "b") == doctest::Approx(0.5 / 5.0).epsilon(1e-12));
  CHECK(prob({}, "</s>") == doctest::Approx(0.5 / 5.0).epsilon(1e-12));
  std::vector<int> after_a = model.symbols_to_tokens({"a"});
  CHECK(prob(after_a, "b") == doctest::Approx(2.5 / 5.0).epsilon(1e-12));  // (2+.5)/(3+2)
  CHECK(prob(after_a, "c") == doctest::Approx(1.5 / 5.0).epsilon(1e-12));
  CHECK(prob(after_a, "a") == doctest::Approx(0.5 / 5.0).epsilon(1e-12));
  std::vector<int> after_b = model.symbols_to_tokens({"b"});
  CHECK(prob(after_b, "</s>") == doctest::Approx(2.5 / 4.0).epsilon(1e-12));  // (2+.5)/(2+2)
}

TEST_CASE("next_logprobs normalizes within 1e-9 on random prefixes") {
  std::vector<TrainingPair> corpus{
      {"c1", {"x", "y", "z"}},
      {"c2", {"y", "y", "x"}},
  };
  NgramModel model = NgramModel::fit(corpus, 3, 0.25, 10);
  Rng rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> prefix;
    int len = rng.next_int(0, 6);
    for (int i = 0; i < len; ++i) {
      prefix.push_back(rng.next_int(2, static_cast<int>(model.vocab().size()) - 1));
    }
    std::vector<double> lp =
        model.next_logprobs(trial % 2 ? "c1" : "unseen", std::span<const int>(prefix));
    double mass = 0.0;
    for (double value : lp) {
      if (std::isfinite(value)) mass += std::exp(value);
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("unseen contexts fall back to the pooled model") {
  std::vector<TrainingPair> corpus{
      {"c1", {"p", "p", "p"}},
      {"c2", {"q"}},
  };
  NgramModel model = NgramModel::fit(corpus, 2, 0.5, 10);
  std::vector<double> pooled = model.next_logprobs("never-seen", {});
  // pooled starts: p from c1, q from c2
  double p_p = std::exp(pooled[static_cast<std::size_t>(*model.vocab().index_of("p"))]);
  double p_q = std::exp(pooled[static_cast<std::size_t>(*model.vocab().index_of("q"))]);
  CHECK(p_p == doctest::Approx(1.5 / 3.5).epsilon(1e-12));  // (1+.5)/(2+0.5*3)
  CHECK(p_q == doctest::Approx(1.5 / 3.5).epsilon(1e-12));
  // the per-context row is sharper than the pooled one
  std::vector<double> ctx = model.next_logprobs("c1", {});
  CHECK(std::exp(ctx[static_cast<std::size_t>(*model.vocab().index_of("p"))]) >
        p_p);
}

TEST_CASE("fit validates its inputs") {
  try {
    NgramModel::fit({}, 2, 0.5, 10);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyCorpus);
  }
  std::vector<TrainingPair> corpus{{"c", {"x"}}};
  CHECK_THROWS_AS(NgramModel::fit(corpus, 0, 0.5, 10), Error);
  CHECK_THROWS_AS(NgramModel::fit(corpus, 2, 0.0, 10), Error);
}

TEST_CASE("model serialization round trips") {
  std::vector<TrainingPair> corpus{
      {"c1", {"a", "b", "a"}},
      {"c2", {"b", "c"}},
  };
  NgramModel model = NgramModel::fit(corpus, 2, 0.3, 12);
  std::string json = model.to_json();
  NgramModel back = NgramModel::from_json(json);

  CHECK(back.order() == model.order());
  CHECK(back.alpha() == model.alpha());
  CHECK(back.max_len() == model.max_len());
  CHECK(back.to_json() == json);  // byte-identical re-serialization

  for (const std::string& context : {"c1", "c2", "unseen"}) {
    std::vector<int> prefix;
    for (int step = 0; step < 3; ++step) {
      std::vector<double> a = model.next_logprobs(context, prefix);
      std::vector<double> b = back.next_logprobs(context, prefix);
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::isfinite(a[i]) || std::isfinite(b[i])) {
          CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
        }
      }
      prefix.push_back(2);
    }
  }
  CHECK_THROWS_AS(NgramModel::from_json("{not json"), Error);
}

TEST_CASE("corruption-style corpora raise the model's mean step entropy") {
  // same sequences, but the second corpus randomly splits each symbol in two
  Rng rng(8080);
  std::vector<TrainingPair> clean, split;
  for (int i = 0; i < 60; ++i) {
    TokenSeq seq{"u1", "u2", "u3", "u1"};
    clean.emplace_back("ctx", seq);
    TokenSeq noisy;
    for (const Token& token : seq) {
      noisy.push_back(token + (rng.next_double() < 0.5 ? "a" : "b"));
    }
    split.emplace_back("ctx", noisy);
  }
  NgramModel clean_model = NgramModel::fit(clean, 2, 0.05, 10);
  NgramModel split_model = NgramModel::fit(split, 2, 0.05, 10);
  CHECK(mean_step_entropy(split_model, split) > mean_step_entropy(clean_model, clean));
}

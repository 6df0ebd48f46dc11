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

#include <algorithm>

#include "segcap/random.hpp"
#include "segcap/spice.hpp"

using namespace segcap;

namespace {

// The young-girl-at-a-table fixture: a four-proposition reference set and
// two candidate pairs, where the second pair covers everything between them.
PropositionBag full_reference() {
  return make_bag({{"girl"}, {"table"}, {"girl", "young"}, {"girl", "sit-at", "table"}});
}

PropositionBag common_candidate() {
  return make_bag({{"girl"}, {"table"}, {"girl", "sit-at", "table"}});
}

PropositionBag young_candidate() { return make_bag({{"girl"}, {"girl", "young"}}); }

std::vector<PropositionBag> set_one() { return {common_candidate(), common_candidate()}; }
std::vector<PropositionBag> set_two() { return {common_candidate(), young_candidate()}; }

PropositionBag random_bag(Rng& rng, int max_props = 6, int universe = 8) {
  PropositionBag bag;
  int count = rng.next_int(0, max_props);
  for (int i = 0; i < count; ++i) {
    int arity = rng.next_int(1, 3);
    std::vector<std::string> elements;
    for (int a = 0; a < arity; ++a) {
      elements.push_back("e" + std::to_string(rng.next_int(0, universe - 1)));
    }
    bag.insert(Proposition(elements));
  }
  return bag;
}

}  // namespace

TEST_CASE("proposition construction folds case and validates arity") {
  Proposition p({"Girl", "Sit-At", "Table"});
  CHECK(p.elements() == std::vector<std::string>{"girl", "sit-at", "table"});
  CHECK_THROWS_AS(Proposition({}), Error);
  CHECK_THROWS_AS(Proposition({"a", "b", "c", "d"}), Error);
  CHECK_THROWS_AS(Proposition({""}), Error);
}

TEST_CASE("f1 against the worked reference set") {
  PropositionBag refs = full_reference();
  CHECK(spice_f1(refs, refs) == doctest::Approx(1.0));
  CHECK(spice_f1(refs, common_candidate()) == doctest::Approx(6.0 / 7.0).epsilon(1e-12));
  CHECK(spice_f1(refs, young_candidate()) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(spice_f1(refs, {}) == 0.0);
  CHECK(spice_f1({}, common_candidate()) == 0.0);
}

TEST_CASE("union_refs takes the set union") {
  CHECK(union_refs({make_bag({{"a"}}), make_bag({{"a"}, {"b"}})}) == make_bag({{"a"}, {"b"}}));

  // two sentences whose bags union to the full four-proposition set
  PropositionBag sentence1 = common_candidate();
  PropositionBag sentence2 = young_candidate();
  CHECK(union_refs({sentence1, sentence2}) == full_reference());
  CHECK(union_refs({sentence1, sentence2}).size() == 4);

  PropositionBag left = make_bag({{"a"}, {"b"}});
  PropositionBag right = make_bag({{"c"}, {"d"}, {"e"}});
  CHECK(union_refs({left, right}).size() == 5);

  CHECK_THROWS_AS(union_refs({}), Error);
}

TEST_CASE("avg, oracle and m-spice reproduce the worked comparison") {
  PropositionBag refs = full_reference();

  double avg_one = avg_spice(refs, set_one());
  double avg_two = avg_spice(refs, set_two());
  CHECK(avg_one == doctest::Approx(6.0 / 7.0).epsilon(1e-12));
  CHECK(avg_two == doctest::Approx((6.0 / 7.0 + 2.0 / 3.0) / 2.0).epsilon(1e-12));
  CHECK(avg_one > avg_two);  // averaging punishes the diverse pair

  double oracle_one = oracle_spice(refs, set_one());
  double oracle_two = oracle_spice(refs, set_two());
  CHECK(oracle_one == doctest::Approx(oracle_two).epsilon(1e-12));  // both 6/7
  CHECK(oracle_one == doctest::Approx(6.0 / 7.0).epsilon(1e-12));

  PrecisionRecallF1 m_one = m_spice(refs, set_one());
  PrecisionRecallF1 m_two = m_spice(refs, set_two());
  CHECK(m_one.f1 == doctest::Approx(6.0 / 7.0).epsilon(1e-12));
  CHECK(m_two.f1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m_two.precision == doctest::Approx(1.0));
  CHECK(m_two.recall == doctest::Approx(1.0));
  CHECK(m_two.f1 > m_one.f1);  // the union rewards diverse correct coverage
}

TEST_CASE("single candidate collapses every mode to f1") {
  PropositionBag refs = full_reference();
  std::vector<PropositionBag> single{young_candidate()};
  double f = spice_f1(refs, single.front());
  CHECK(avg_spice(refs, single) == doctest::Approx(f));
  CHECK(oracle_spice(refs, single) == doctest::Approx(f));
  CHECK(m_spice(refs, single).f1 == doctest::Approx(f));
}

TEST_CASE("identical candidate bags make all modes coincide") {
  PropositionBag refs = full_reference();
  std::vector<PropositionBag> same{common_candidate(), common_candidate(), common_candidate()};
  double f = spice_f1(refs, common_candidate());
  CHECK(avg_spice(refs, same) == doctest::Approx(f));
  CHECK(oracle_spice(refs, same) == doctest::Approx(f));
  CHECK(m_spice(refs, same).f1 == doctest::Approx(f));
}

TEST_CASE("mode errors") {
  PropositionBag refs = full_reference();
  try {
    avg_spice(refs, {});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyCandidates);
  }
  CHECK_THROWS_AS(oracle_spice(refs, {}), Error);
  CHECK_THROWS_AS(m_spice(refs, {}), Error);
}

TEST_CASE("corpus_spice truncates, averages and validates") {
  std::vector<ImagePropositions> images{
      {"img_one", {common_candidate(), young_candidate()}, set_one()},
      {"img_two", {common_candidate(), young_candidate()}, set_two()},
  };

  SUBCASE("worked two-image m-spice average at n=2") {
    CorpusSpice result = corpus_spice(images, SpiceMode::m_spice, 2);
    CHECK(result.score == doctest::Approx((6.0 / 7.0 + 1.0) / 2.0).epsilon(1e-12));
    REQUIRE(result.per_image.size() == 2);
    CHECK(result.per_image[0].f1 == doctest::Approx(6.0 / 7.0));
    CHECK(result.per_image[1].f1 == doctest::Approx(1.0));
  }

  SUBCASE("n=1 collapses all modes to the first candidate's f1") {
    double single = corpus_spice(images, SpiceMode::single, 1).score;
    CHECK(corpus_spice(images, SpiceMode::avg, 1).score == doctest::Approx(single));
    CHECK(corpus_spice(images, SpiceMode::oracle, 1).score == doctest::Approx(single));
    CHECK(corpus_spice(images, SpiceMode::m_spice, 1).score == doctest::Approx(single));
  }

  SUBCASE("perfect single candidates give 1.0 in all modes") {
    std::vector<ImagePropositions> perfect{
        {"p", {full_reference()}, {full_reference()}},
    };
    for (SpiceMode mode :
         {SpiceMode::single, SpiceMode::avg, SpiceMode::oracle, SpiceMode::m_spice}) {
      CHECK(corpus_spice(perfect, mode, 1).score == doctest::Approx(1.0));
    }
  }

  SUBCASE("insufficient candidates name the image") {
    try {
      corpus_spice(images, SpiceMode::m_spice, 3);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::InsufficientCandidates);
      CHECK(std::string(e.what()).find("img_one") != std::string::npos);
    }
  }
}

TEST_CASE("property: oracle >= avg and union recall is monotone") {
  Rng rng(2468);
  for (int trial = 0; trial < 300; ++trial) {
    PropositionBag refs = random_bag(rng, 8);
    if (refs.empty()) refs = make_bag({{"anchor"}});
    int count = rng.next_int(1, 6);
    std::vector<PropositionBag> candidates;
    for (int j = 0; j < count; ++j) candidates.push_back(random_bag(rng));

    CHECK(oracle_spice(refs, candidates) >= avg_spice(refs, candidates) - 1e-12);
    for (const PropositionBag& bag : candidates) {
      CHECK(oracle_spice(refs, candidates) >= spice_f1(refs, bag) - 1e-12);
    }

    double previous_recall = 0.0;
    for (std::size_t j = 1; j <= candidates.size(); ++j) {
      std::vector<PropositionBag> head(candidates.begin(),
                                       candidates.begin() + static_cast<long>(j));
      PrecisionRecallF1 m = m_spice(refs, head);
      CHECK(m.recall >= previous_recall - 1e-12);
      previous_recall = m.recall;
    }
  }
}

TEST_CASE("property: m-spice precision is 1 when candidates stay inside the references") {
  Rng rng(1357);
  for (int trial = 0; trial < 100; ++trial) {
    PropositionBag refs = random_bag(rng, 8);
    if (refs.empty()) refs = make_bag({{"anchor"}});
    // draw candidate bags as subsets of the reference set
    std::vector<PropositionBag> candidates;
    int count = rng.next_int(1, 4);
    bool any = false;
    for (int j = 0; j < count; ++j) {
      PropositionBag bag;
      for (const Proposition& p : refs) {
        if (rng.next_double() < 0.5) bag.insert(p);
      }
      any = any || !bag.empty();
      candidates.push_back(std::move(bag));
    }
    if (!any) candidates.front().insert(*refs.begin());
    CHECK(m_spice(refs, candidates).precision == doctest::Approx(1.0));
  }
}

TEST_CASE("truncation follows the declared candidate order") {
  // same bags, different declared order: the first-n cut differs
  std::vector<ImagePropositions> forward{
      {"img", {full_reference()}, {common_candidate(), young_candidate()}}};
  std::vector<ImagePropositions> reversed{
      {"img", {full_reference()}, {young_candidate(), common_candidate()}}};
  double first = corpus_spice(forward, SpiceMode::single, 1).score;
  double second = corpus_spice(reversed, SpiceMode::single, 1).score;
  CHECK(first == doctest::Approx(6.0 / 7.0));
  CHECK(second == doctest::Approx(2.0 / 3.0));
  CHECK(first != second);
  // while the full-set modes agree
  CHECK(corpus_spice(forward, SpiceMode::m_spice, 2).score ==
        doctest::Approx(corpus_spice(reversed, SpiceMode::m_spice, 2).score));
}

TEST_CASE("property: candidate order does not change avg/oracle/m-spice") {
  Rng rng(8642);
  for (int trial = 0; trial < 100; ++trial) {
    PropositionBag refs = random_bag(rng, 8);
    if (refs.empty()) refs = make_bag({{"anchor"}});
    std::vector<PropositionBag> candidates;
    int count = rng.next_int(2, 5);
    for (int j = 0; j < count; ++j) candidates.push_back(random_bag(rng));

    double avg_fwd = avg_spice(refs, candidates);
    double oracle_fwd = oracle_spice(refs, candidates);
    double m_fwd = m_spice(refs, candidates).f1;
    std::reverse(candidates.begin(), candidates.end());
    CHECK(avg_spice(refs, candidates) == doctest::Approx(avg_fwd).epsilon(1e-12));
    CHECK(oracle_spice(refs, candidates) == doctest::Approx(oracle_fwd).epsilon(1e-12));
    CHECK(m_spice(refs, candidates).f1 == doctest::Approx(m_fwd).epsilon(1e-12));
  }
}

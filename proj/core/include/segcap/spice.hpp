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

#include <set>
#include <string>
#include <vector>

#include "segcap/error.hpp"

namespace segcap {

/// Semantic proposition: (object), (object, attribute) or
/// (subject, relation, object). Elements are case-folded on construction.
class Proposition {
 public:
  /// Throws InvalidArgument unless 1 <= elements.size() <= 3 and all
  /// elements are nonempty.
  explicit Proposition(std::vector<std::string> elements);

  const std::vector<std::string>& elements() const { return elements_; }
  std::size_t arity() const { return elements_.size(); }

  auto operator<=>(const Proposition&) const = default;

 private:
  std::vector<std::string> elements_;
};

/// Set semantics: duplicates collapse on ingestion.
using PropositionBag = std::set<Proposition>;

PropositionBag make_bag(std::initializer_list<std::vector<std::string>> props);

/// Exact-match F1 between proposition sets. Empty candidate or empty
/// reference scores 0 (generated captions can legitimately parse to nothing).
double spice_f1(const PropositionBag& reference, const PropositionBag& candidate);

struct PrecisionRecallF1 {
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

PrecisionRecallF1 spice_prf(const PropositionBag& reference, const PropositionBag& candidate);

/// Union of per-sentence reference bags. Throws EmptyReferences on an empty
/// list.
PropositionBag union_refs(const std::vector<PropositionBag>& bags);

/// Mean per-candidate F1 against the reference union.
double avg_spice(const PropositionBag& reference_union,
                 const std::vector<PropositionBag>& candidates);

/// Best per-candidate F1 against the reference union.
double oracle_spice(const PropositionBag& reference_union,
                    const std::vector<PropositionBag>& candidates);

/// F1 (with its precision/recall parts) between the reference union and the
/// union of all candidate propositions.
PrecisionRecallF1 m_spice(const PropositionBag& reference_union,
                          const std::vector<PropositionBag>& candidates);

enum class SpiceMode { single, avg, oracle, m_spice };

const char* spice_mode_name(SpiceMode mode);

struct ImagePropositions {
  std::string image_id;
  std::vector<PropositionBag> references;  // one bag per reference sentence
  std::vector<PropositionBag> candidates;  // declared candidate order
};

struct CorpusSpice {
  double score = 0.0;      // f1 for m_spice mode, otherwise the mode's value
  double precision = 0.0;  // populated for m_spice
  double recall = 0.0;     // populated for m_spice
  std::vector<PrecisionRecallF1> per_image;
};

/// Truncates every image's candidate list to its first n, applies the mode
/// per image and averages over images. Throws InsufficientCandidates naming
/// the first offending image.
CorpusSpice corpus_spice(const std::vector<ImagePropositions>& images, SpiceMode mode,
                         std::size_t n);

}  // namespace segcap

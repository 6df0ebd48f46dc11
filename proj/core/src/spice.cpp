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

#include "segcap/spice.hpp"

#include <algorithm>
#include <cctype>

#include "segcap/parallel.hpp"

namespace segcap {

Proposition::Proposition(std::vector<std::string> elements) : elements_(std::move(elements)) {
  if (elements_.empty() || elements_.size() > 3) {
    fail(Errc::InvalidArgument, "proposition arity must be 1, 2 or 3");
  }
  for (std::string& element : elements_) {
    if (element.empty()) {
      fail(Errc::InvalidArgument, "proposition elements must be nonempty");
    }
    std::transform(element.begin(), element.end(), element.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  }
}

PropositionBag make_bag(std::initializer_list<std::vector<std::string>> props) {
  PropositionBag bag;
  for (const auto& p : props) bag.insert(Proposition(p));
  return bag;
}

PrecisionRecallF1 spice_prf(const PropositionBag& reference, const PropositionBag& candidate) {
  PrecisionRecallF1 out;
  if (reference.empty() || candidate.empty()) return out;
  std::size_t hits = 0;
  for (const Proposition& p : candidate) {
    if (reference.count(p)) ++hits;
  }
  out.precision = static_cast<double>(hits) / static_cast<double>(candidate.size());
  out.recall = static_cast<double>(hits) / static_cast<double>(reference.size());
  if (out.precision + out.recall > 0.0) {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

double spice_f1(const PropositionBag& reference, const PropositionBag& candidate) {
  return spice_prf(reference, candidate).f1;
}

PropositionBag union_refs(const std::vector<PropositionBag>& bags) {
  if (bags.empty()) {
    fail(Errc::EmptyReferences, "union_refs: no reference bags");
  }
  PropositionBag out;
  for (const PropositionBag& bag : bags) out.insert(bag.begin(), bag.end());
  return out;
}

double avg_spice(const PropositionBag& reference_union,
                 const std::vector<PropositionBag>& candidates) {
  if (candidates.empty()) {
    fail(Errc::EmptyCandidates, "avg_spice: no candidates");
  }
  double sum = 0.0;
  for (const PropositionBag& bag : candidates) sum += spice_f1(reference_union, bag);
  return sum / static_cast<double>(candidates.size());
}

double oracle_spice(const PropositionBag& reference_union,
                    const std::vector<PropositionBag>& candidates) {
  if (candidates.empty()) {
    fail(Errc::EmptyCandidates, "oracle_spice: no candidates");
  }
  double best = 0.0;
  for (const PropositionBag& bag : candidates) {
    best = std::max(best, spice_f1(reference_union, bag));
  }
  return best;
}

PrecisionRecallF1 m_spice(const PropositionBag& reference_union,
                          const std::vector<PropositionBag>& candidates) {
  if (candidates.empty()) {
    fail(Errc::EmptyCandidates, "m_spice: no candidates");
  }
  PropositionBag pooled;
  for (const PropositionBag& bag : candidates) pooled.insert(bag.begin(), bag.end());
  return spice_prf(reference_union, pooled);
}

const char* spice_mode_name(SpiceMode mode) {
  switch (mode) {
    case SpiceMode::single: return "single";
    case SpiceMode::avg: return "avg";
    case SpiceMode::oracle: return "oracle";
    case SpiceMode::m_spice: return "m-spice";
  }
  return "single";
}

CorpusSpice corpus_spice(const std::vector<ImagePropositions>& images, SpiceMode mode,
                         std::size_t n) {
  if (images.empty()) {
    fail(Errc::EmptyCorpus, "corpus_spice: no images");
  }
  if (n < 1) {
    fail(Errc::InvalidArgument, "corpus_spice: n must be >= 1");
  }
  for (const ImagePropositions& image : images) {
    if (image.candidates.size() < n) {
      fail(Errc::InsufficientCandidates,
           "image " + image.image_id + " has " + std::to_string(image.candidates.size()) +
               " candidates, needs " + std::to_string(n));
    }
  }

  CorpusSpice out;
  out.per_image.resize(images.size());
  parallel_for_indexed(images.size(), [&](std::size_t i) {
    const ImagePropositions& image = images[i];
    PropositionBag reference = union_refs(image.references);
    std::vector<PropositionBag> kept(image.candidates.begin(),
                                     image.candidates.begin() + static_cast<long>(n));
    PrecisionRecallF1 value;
    switch (mode) {
      case SpiceMode::single:
        value = spice_prf(reference, kept.front());
        break;
      case SpiceMode::avg:
        value.f1 = avg_spice(reference, kept);
        break;
      case SpiceMode::oracle:
        value.f1 = oracle_spice(reference, kept);
        break;
      case SpiceMode::m_spice:
        value = m_spice(reference, kept);
        break;
    }
    out.per_image[i] = value;
  });

  for (const PrecisionRecallF1& value : out.per_image) {
    out.score += value.f1;
    out.precision += value.precision;
    out.recall += value.recall;
  }
  double count = static_cast<double>(images.size());
  out.score /= count;
  out.precision /= count;
  out.recall /= count;
  return out;
}

}  // namespace segcap

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

#include "segcap/ngram_metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_set>

#include "segcap/parallel.hpp"

namespace segcap {

namespace {

constexpr char kSep = '\x1f';

void require_instances(const std::vector<EvalInstance>& instances) {
  if (instances.empty()) {
    fail(Errc::EmptyCorpus, "metric called on empty instance list");
  }
  for (const EvalInstance& inst : instances) {
    if (inst.references.empty()) {
      fail(Errc::EmptyReferences, "instance without references: " + inst.image_id);
    }
  }
}

}  // namespace

NGramProfile::NGramProfile(const TokenSeq& seq, int max_order) : max_order_(max_order) {
  orders_.resize(static_cast<std::size_t>(max_order));
  for (int n = 1; n <= max_order; ++n) {
    auto& map = orders_[static_cast<std::size_t>(n - 1)];
    if (static_cast<int>(seq.size()) < n) continue;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= seq.size(); ++i) {
      map[key(std::span<const Token>(seq.data() + i, static_cast<std::size_t>(n)))]++;
    }
  }
}

const std::unordered_map<std::string, int>& NGramProfile::order(int n) const {
  if (n < 1 || n > max_order_) {
    fail(Errc::InvalidArgument, "NGramProfile order out of range");
  }
  return orders_[static_cast<std::size_t>(n - 1)];
}

std::string NGramProfile::key(std::span<const Token> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(kSep);
    out += tokens[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// BLEU-4
// ---------------------------------------------------------------------------

namespace {

struct BleuStats {
  std::array<std::int64_t, 4> matches{0, 0, 0, 0};
  std::array<std::int64_t, 4> totals{0, 0, 0, 0};
  std::int64_t candidate_len = 0;
  std::int64_t reference_len = 0;
};

BleuStats bleu_instance_stats(const EvalInstance& inst) {
  BleuStats stats;
  NGramProfile cand(inst.candidate);
  std::vector<NGramProfile> refs;
  refs.reserve(inst.references.size());
  for (const TokenSeq& ref : inst.references) refs.emplace_back(ref);

  for (int n = 1; n <= 4; ++n) {
    for (const auto& [gram, count] : cand.order(n)) {
      int clip = 0;
      for (const NGramProfile& ref : refs) {
        auto it = ref.order(n).find(gram);
        if (it != ref.order(n).end()) clip = std::max(clip, it->second);
      }
      stats.matches[static_cast<std::size_t>(n - 1)] += std::min(count, clip);
      stats.totals[static_cast<std::size_t>(n - 1)] += count;
    }
  }

  std::int64_t c = static_cast<std::int64_t>(inst.candidate.size());
  std::int64_t best_ref = static_cast<std::int64_t>(inst.references.front().size());
  for (const TokenSeq& ref : inst.references) {
    auto len = static_cast<std::int64_t>(ref.size());
    auto diff = [&](std::int64_t l) { return std::llabs(l - c); };
    if (diff(len) < diff(best_ref) || (diff(len) == diff(best_ref) && len < best_ref)) {
      best_ref = len;
    }
  }
  stats.candidate_len = c;
  stats.reference_len = best_ref;
  return stats;
}

}  // namespace

double bleu4(const std::vector<EvalInstance>& instances) {
  require_instances(instances);

  std::vector<BleuStats> per_instance(instances.size());
  parallel_for_indexed(instances.size(),
                       [&](std::size_t i) { per_instance[i] = bleu_instance_stats(instances[i]); });

  BleuStats corpus;
  for (const BleuStats& s : per_instance) {
    for (std::size_t n = 0; n < 4; ++n) {
      corpus.matches[n] += s.matches[n];
      corpus.totals[n] += s.totals[n];
    }
    corpus.candidate_len += s.candidate_len;
    corpus.reference_len += s.reference_len;
  }

  if (corpus.candidate_len == 0) return 0.0;
  double log_prec = 0.0;
  for (std::size_t n = 0; n < 4; ++n) {
    if (corpus.matches[n] == 0 || corpus.totals[n] == 0) return 0.0;
    log_prec += 0.25 * std::log(static_cast<double>(corpus.matches[n]) /
                                static_cast<double>(corpus.totals[n]));
  }
  double ratio = 1.0 - static_cast<double>(corpus.reference_len) /
                           static_cast<double>(corpus.candidate_len);
  double log_bp = std::min(0.0, ratio);
  return std::exp(log_prec + log_bp);
}

// ---------------------------------------------------------------------------
// ROUGE-L
// ---------------------------------------------------------------------------

namespace {

int lcs_length(const TokenSeq& a, const TokenSeq& b) {
  std::size_t la = a.size(), lb = b.size();
  if (la == 0 || lb == 0) return 0;
  std::vector<int> prev(lb + 1, 0), cur(lb + 1, 0);
  for (std::size_t i = 1; i <= la; ++i) {
    for (std::size_t j = 1; j <= lb; ++j) {
      cur[j] = (a[i - 1] == b[j - 1]) ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[lb];
}

double rouge_instance(const EvalInstance& inst, double beta) {
  double best = 0.0;
  for (const TokenSeq& ref : inst.references) {
    int lcs = lcs_length(inst.candidate, ref);
    if (lcs == 0 || inst.candidate.empty() || ref.empty()) continue;
    double p = static_cast<double>(lcs) / static_cast<double>(inst.candidate.size());
    double r = static_cast<double>(lcs) / static_cast<double>(ref.size());
    double denom = r + beta * beta * p;
    if (denom <= 0.0) continue;
    best = std::max(best, (1.0 + beta * beta) * r * p / denom);
  }
  return best;
}

}  // namespace

double rouge_l(const std::vector<EvalInstance>& instances, double beta) {
  require_instances(instances);
  std::vector<double> scores(instances.size());
  parallel_for_indexed(instances.size(),
                       [&](std::size_t i) { scores[i] = rouge_instance(instances[i], beta); });
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(instances.size());
}

// ---------------------------------------------------------------------------
// CIDEr
// ---------------------------------------------------------------------------

namespace {

using TfIdfVec = std::unordered_map<std::string, double>;

std::array<TfIdfVec, 4> tfidf_vectors(const NGramProfile& profile,
                                      const std::unordered_map<std::string, int>& df,
                                      double log_images) {
  std::array<TfIdfVec, 4> vecs;
  for (int n = 1; n <= 4; ++n) {
    for (const auto& [gram, count] : profile.order(n)) {
      auto it = df.find(gram);
      double d = it == df.end() ? 1.0 : std::max(1.0, static_cast<double>(it->second));
      double idf = log_images - std::log(d);
      vecs[static_cast<std::size_t>(n - 1)][gram] = static_cast<double>(count) * idf;
    }
  }
  return vecs;
}

double cosine(const TfIdfVec& a, const TfIdfVec& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [gram, va] : a) {
    na += va * va;
    auto it = b.find(gram);
    if (it != b.end()) dot += va * it->second;
  }
  for (const auto& [gram, vb] : b) nb += vb * vb;
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

double cider(const std::vector<EvalInstance>& instances) {
  require_instances(instances);

  // One document per image: an n-gram's df is the number of images whose
  // reference set mentions it at least once.
  std::unordered_map<std::string, int> df;
  for (const EvalInstance& inst : instances) {
    std::unordered_set<std::string> seen;
    for (const TokenSeq& ref : inst.references) {
      NGramProfile profile(ref);
      for (int n = 1; n <= 4; ++n) {
        for (const auto& [gram, count] : profile.order(n)) seen.insert(gram);
      }
    }
    for (const std::string& gram : seen) df[gram]++;
  }
  double log_images = std::log(static_cast<double>(instances.size()));

  std::vector<double> scores(instances.size());
  parallel_for_indexed(instances.size(), [&](std::size_t i) {
    const EvalInstance& inst = instances[i];
    auto cand_vecs = tfidf_vectors(NGramProfile(inst.candidate), df, log_images);
    std::array<double, 4> order_sums{0.0, 0.0, 0.0, 0.0};
    for (const TokenSeq& ref : inst.references) {
      auto ref_vecs = tfidf_vectors(NGramProfile(ref), df, log_images);
      for (std::size_t n = 0; n < 4; ++n) {
        order_sums[n] += cosine(cand_vecs[n], ref_vecs[n]);
      }
    }
    double score = 0.0;
    for (std::size_t n = 0; n < 4; ++n) {
      score += 0.25 * order_sums[n] / static_cast<double>(inst.references.size());
    }
    scores[i] = score;
  });

  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(instances.size());
}

// ---------------------------------------------------------------------------
// METEOR (exact surface matches)
// ---------------------------------------------------------------------------

namespace {

// Exact maximize-matches-then-minimize-chunks alignment. Reference positions
// live in a bitmask; candidate positions are processed left to right with the
// "expected next reference index" carried so chunk continuations cost nothing.
MeteorAlignment align_exact(const TokenSeq& cand, const TokenSeq& ref) {
  int lc = static_cast<int>(cand.size());
  int lr = static_cast<int>(ref.size());
  // value = matches * 64 - chunks, maximized; fits easily (matches <= 12).
  constexpr int kUnreachable = std::numeric_limits<int>::min();
  std::size_t masks = static_cast<std::size_t>(1) << lr;
  std::vector<int> cur(masks * static_cast<std::size_t>(lr + 1), kUnreachable);
  std::vector<int> nxt(cur.size(), kUnreachable);
  auto at = [lr](std::vector<int>& layer, std::size_t mask, int expect) -> int& {
    return layer[mask * static_cast<std::size_t>(lr + 1) + static_cast<std::size_t>(expect)];
  };
  at(cur, 0, 0) = 0;

  for (int i = 0; i < lc; ++i) {
    std::fill(nxt.begin(), nxt.end(), kUnreachable);
    for (std::size_t mask = 0; mask < masks; ++mask) {
      for (int expect = 0; expect <= lr; ++expect) {
        int value = at(cur, mask, expect);
        if (value == kUnreachable) continue;
        // leave candidate position i unmatched
        int& skip = at(nxt, mask, 0);
        skip = std::max(skip, value);
        // match it to any free reference position with the same surface
        for (int j = 0; j < lr; ++j) {
          if (mask & (static_cast<std::size_t>(1) << j)) continue;
          if (cand[static_cast<std::size_t>(i)] != ref[static_cast<std::size_t>(j)]) continue;
          int chunk_cost = (expect != 0 && j == expect) ? 0 : 1;
          int& slot = at(nxt, mask | (static_cast<std::size_t>(1) << j), j + 1);
          slot = std::max(slot, value + 64 - chunk_cost);
        }
      }
    }
    std::swap(cur, nxt);
  }

  int best = 0;
  for (int v : cur) best = std::max(best, v);
  MeteorAlignment out;
  out.matches = (best + 63) / 64;  // chunks <= matches, so rounding up recovers matches
  out.chunks = out.matches * 64 - best;
  return out;
}

// Greedy longest-common-block alignment for long sequences. Each round
// consumes the longest block over unused positions (ties toward the smallest
// candidate then reference start), which preserves the maximal match count
// and approximates the minimal chunk count.
MeteorAlignment align_greedy(const TokenSeq& cand, const TokenSeq& ref) {
  std::vector<bool> used_c(cand.size(), false), used_r(ref.size(), false);
  MeteorAlignment out;
  for (;;) {
    std::size_t best_len = 0, best_i = 0, best_j = 0;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (used_c[i]) continue;
      for (std::size_t j = 0; j < ref.size(); ++j) {
        if (used_r[j]) continue;
        std::size_t len = 0;
        while (i + len < cand.size() && j + len < ref.size() && !used_c[i + len] &&
               !used_r[j + len] && cand[i + len] == ref[j + len]) {
          ++len;
        }
        if (len > best_len) {
          best_len = len;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (best_len == 0) break;
    for (std::size_t k = 0; k < best_len; ++k) {
      used_c[best_i + k] = true;
      used_r[best_j + k] = true;
    }
    out.matches += static_cast<int>(best_len);
    out.chunks += 1;
  }
  return out;
}

}  // namespace

MeteorAlignment meteor_align(const TokenSeq& candidate, const TokenSeq& reference) {
  const TokenSeq* shorter = &reference;
  const TokenSeq* longer = &candidate;
  if (candidate.size() < reference.size()) {
    shorter = &candidate;
    longer = &reference;
  }
  // matches and chunks are symmetric in the two sides, so the DP always
  // masks the shorter one
  if (static_cast<int>(shorter->size()) <= kMeteorExactLimit) {
    return align_exact(*longer, *shorter);
  }
  return align_greedy(candidate, reference);
}

double meteor_exact(const std::vector<EvalInstance>& instances, double alpha, double beta_frag,
                    double gamma) {
  require_instances(instances);
  std::vector<double> scores(instances.size());
  parallel_for_indexed(instances.size(), [&](std::size_t i) {
    const EvalInstance& inst = instances[i];
    double best = 0.0;
    for (const TokenSeq& ref : inst.references) {
      MeteorAlignment alignment = meteor_align(inst.candidate, ref);
      if (alignment.matches == 0 || inst.candidate.empty() || ref.empty()) continue;
      double m = alignment.matches;
      double p = m / static_cast<double>(inst.candidate.size());
      double r = m / static_cast<double>(ref.size());
      double f_mean = p * r / (alpha * p + (1.0 - alpha) * r);
      double penalty = gamma * std::pow(static_cast<double>(alignment.chunks) / m, beta_frag);
      best = std::max(best, f_mean * (1.0 - penalty));
    }
    scores[i] = best;
  });
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(instances.size());
}

MetricReport compute_metric_report(const std::vector<EvalInstance>& instances,
                                   const MetricSelection& selection) {
  MetricReport report;
  if (selection.bleu4) report.bleu4 = bleu4(instances);
  if (selection.meteor) report.meteor = meteor_exact(instances);
  if (selection.rouge_l) report.rouge_l = rouge_l(instances);
  if (selection.cider) report.cider = cider(instances);
  return report;
}

}  // namespace segcap

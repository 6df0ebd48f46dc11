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

#include "segcap/diversity.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "segcap/io.hpp"

namespace segcap {

void CandidateSet::validate() const {
  if (!provenance || provenance->method != DecodeMethod::beam) return;
  for (std::size_t j = 1; j < candidates.size(); ++j) {
    if (candidates[j].score > candidates[j - 1].score) {
      fail(Errc::InvalidArgument,
           "beam candidate list for image " + image_id + " is not sorted by score");
    }
  }
}

std::size_t vocab_size(const std::vector<CandidateSet>& caption_sets, std::size_t n,
                       int min_count) {
  if (n < 1) fail(Errc::InvalidArgument, "vocab_size: n must be >= 1");
  if (min_count < 1) fail(Errc::InvalidArgument, "vocab_size: min_count must be >= 1");

  std::map<std::string, long> counts;
  for (const CandidateSet& set : caption_sets) {
    set.validate();
    if (set.candidates.size() < n) {
      fail(Errc::InsufficientCandidates,
           "image " + set.image_id + " has " + std::to_string(set.candidates.size()) +
               " candidates, needs " + std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      for (const Token& token : set.candidates[j].tokens) {
        for (const Token& word : normalize_text(token)) counts[word]++;
      }
    }
  }
  std::size_t kept = 0;
  for (const auto& [word, count] : counts) {
    if (count >= min_count) ++kept;
  }
  return kept;
}

namespace {

void append_ngram_points(const MethodRun& run,
                         const std::map<std::string, std::vector<TokenSeq>>& references,
                         const MetricSelection& selection, int n,
                         std::vector<CurvePoint>& points) {
  std::vector<EvalInstance> instances;
  for (const CandidateSet& set : run.candidates) {
    set.validate();
    if (set.candidates.size() < static_cast<std::size_t>(n)) {
      fail(Errc::InsufficientCandidates,
           "image " + set.image_id + " has " + std::to_string(set.candidates.size()) +
               " candidates, needs " + std::to_string(n));
    }
    auto ref_it = references.find(set.image_id);
    if (ref_it == references.end()) {
      fail(Errc::IdMismatch, "no references for image " + set.image_id);
    }
    for (int j = 0; j < n; ++j) {
      instances.push_back(EvalInstance{set.image_id, set.candidates[static_cast<std::size_t>(j)].tokens,
                                       ref_it->second});
    }
  }
  MetricReport report = compute_metric_report(instances, selection);
  if (report.bleu4) points.push_back({run.method, n, "bleu4", *report.bleu4});
  if (report.meteor) points.push_back({run.method, n, "meteor", *report.meteor});
  if (report.rouge_l) points.push_back({run.method, n, "rouge_l", *report.rouge_l});
  if (report.cider) points.push_back({run.method, n, "cider", *report.cider});
}

std::string spice_metric_name(SpiceMode mode) {
  switch (mode) {
    case SpiceMode::single: return "spice";
    case SpiceMode::avg: return "avg-spice";
    case SpiceMode::oracle: return "oracle-spice";
    case SpiceMode::m_spice: return "m-spice";
  }
  return "spice";
}

}  // namespace

std::vector<CurvePoint> multi_candidate_eval(
    const std::vector<MethodRun>& runs,
    const std::map<std::string, std::vector<TokenSeq>>& references,
    const MultiCandidateSpec& spec, const std::vector<int>& n_list) {
  if (n_list.empty()) fail(Errc::InvalidArgument, "multi_candidate_eval: empty n list");

  bool any_ngram = spec.ngram.bleu4 || spec.ngram.meteor || spec.ngram.rouge_l || spec.ngram.cider;
  std::vector<CurvePoint> points;
  for (const MethodRun& run : runs) {
    for (int n : n_list) {
      if (n < 1) fail(Errc::InvalidArgument, "multi_candidate_eval: n must be >= 1");
      for (SpiceMode mode : spec.spice_modes) {
        CorpusSpice result = corpus_spice(run.propositions, mode, static_cast<std::size_t>(n));
        points.push_back({run.method, n, spice_metric_name(mode), result.score});
        if (mode == SpiceMode::m_spice && spec.mspice_precision_recall) {
          points.push_back({run.method, n, "m-spice-precision", result.precision});
          points.push_back({run.method, n, "m-spice-recall", result.recall});
        }
      }
      if (any_ngram) {
        append_ngram_points(run, references, spec.ngram, n, points);
      }
    }
  }
  return points;
}

namespace {

std::string format_double(double value) {
  char buffer[64];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void sort_points(std::vector<CurvePoint>& points) {
  std::sort(points.begin(), points.end(), [](const CurvePoint& a, const CurvePoint& b) {
    if (a.method != b.method) return a.method < b.method;
    if (a.n != b.n) return a.n < b.n;
    if (a.metric != b.metric) return a.metric < b.metric;
    return a.value < b.value;
  });
}

}  // namespace

std::string render_report(std::vector<CurvePoint> points, ReportFormat format) {
  sort_points(points);
  if (format == ReportFormat::csv) {
    std::string out = "method,n,metric,value\n";
    for (const CurvePoint& p : points) {
      out += p.method;
      out += ',';
      out += std::to_string(p.n);
      out += ',';
      out += p.metric;
      out += ',';
      out += format_double(p.value);
      out += '\n';
    }
    return out;
  }
  nlohmann::json doc = nlohmann::json::array();
  for (const CurvePoint& p : points) {
    doc.push_back({{"method", p.method}, {"n", p.n}, {"metric", p.metric}, {"value", p.value}});
  }
  return doc.dump(2) + "\n";
}

void emit_report(const std::vector<CurvePoint>& points, ReportFormat format,
                 const std::string& path) {
  atomic_write_file(path, render_report(points, format));
}

std::vector<CurvePoint> parse_report(const std::string& text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) fail(Errc::ParseError, "empty report");

  std::vector<CurvePoint> points;
  if (text[first] == '[') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
      for (const auto& item : doc) {
        points.push_back({item.at("method").get<std::string>(), item.at("n").get<int>(),
                          item.at("metric").get<std::string>(), item.at("value").get<double>()});
      }
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::ParseError, std::string("malformed JSON report: ") + e.what());
    }
    return points;
  }

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "method,n,metric,value") {
        fail(Errc::ParseError, "line 1: expected CSV header method,n,metric,value");
      }
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() != 4) {
      fail(Errc::ParseError, "line " + std::to_string(line_no) + ": expected 4 CSV fields");
    }
    CurvePoint p;
    p.method = fields[0];
    p.metric = fields[2];
    try {
      p.n = std::stoi(fields[1]);
      p.value = std::strtod(fields[3].c_str(), nullptr);
    } catch (const std::exception&) {
      fail(Errc::ParseError, "line " + std::to_string(line_no) + ": bad numeric field");
    }
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace segcap

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

#include "common.hpp"

#include <cstdio>
#include <iostream>
#include <map>
#include <set>

namespace segcap::cli {

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
    std::fflush(stdout);
    return;
  }
  atomic_write_file(path, content);
}

void print_error(Errc code, const std::string& message) {
  std::cerr << "segcap: error: " << errc_name(code) << ": " << message << "\n";
}

int exit_code_for(Errc code) { return code == Errc::IoError ? kExitIo : kExitValidation; }

TokenSeq caption_tokens(const std::string& caption, Domain domain) {
  switch (domain) {
    case Domain::word:
      return normalize_text(caption);
    case Domain::character: {
      TokenSeq words = normalize_text(caption);
      TokenSeq out;
      for (std::size_t w = 0; w < words.size(); ++w) {
        if (w > 0) out.push_back("_");
        for (char c : words[w]) out.push_back(std::string(1, c));
      }
      return out;
    }
    case Domain::unit: {
      TokenSeq out;
      std::string current;
      for (char c : caption) {
        if (c == ' ' || c == '\t') {
          if (!current.empty()) {
            out.push_back(std::move(current));
            current.clear();
          }
        } else {
          current.push_back(c);
        }
      }
      if (!current.empty()) out.push_back(std::move(current));
      return out;
    }
  }
  return {};
}

std::vector<CandidateSet> group_candidates(const std::vector<CaptionRecord>& records,
                                           Domain domain) {
  std::map<std::string, std::vector<std::pair<long, TokenSeq>>> by_image;
  std::set<std::pair<std::string, long>> seen;
  long fallback = 0;
  for (const CaptionRecord& record : records) {
    long cid = record.candidate_id ? *record.candidate_id : fallback++;
    if (record.candidate_id && !seen.emplace(record.image_id, cid).second) {
      fail(Errc::DuplicateKey, "duplicate candidate (" + record.image_id + ", " +
                                   std::to_string(cid) + ")");
    }
    by_image[record.image_id].emplace_back(cid, caption_tokens(record.caption, domain));
  }

  std::vector<CandidateSet> out;
  out.reserve(by_image.size());
  for (auto& [image_id, list] : by_image) {
    std::stable_sort(list.begin(), list.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    CandidateSet set;
    set.image_id = image_id;
    for (auto& [cid, tokens] : list) {
      set.candidates.push_back({std::move(tokens), 0.0});
    }
    out.push_back(std::move(set));
  }
  return out;
}

}  // namespace segcap::cli

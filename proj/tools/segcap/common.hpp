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

#include <string>
#include <vector>

#include "segcap/diversity.hpp"
#include "segcap/error.hpp"
#include "segcap/io.hpp"
#include "segcap/units.hpp"

namespace segcap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

/// Writes atomically to a path, or to stdout when path is "-".
void write_output(const std::string& path, const std::string& content);

/// One machine-parsable line on stderr: "segcap: error: <Code>: <message>".
void print_error(Errc code, const std::string& message);

int exit_code_for(Errc code);

/// Tokenizes one caption for the requested domain: word applies the
/// normalization rule, char splits the normalized text into characters with
/// "_" standing in for the inter-word boundary, unit splits on whitespace.
TokenSeq caption_tokens(const std::string& caption, Domain domain);

/// Candidate captions grouped per image, ordered by candidate_id (file
/// order when ids are absent). Duplicate (image_id, candidate_id) pairs
/// throw DuplicateKey.
std::vector<CandidateSet> group_candidates(const std::vector<CaptionRecord>& records,
                                           Domain domain);

}  // namespace segcap::cli

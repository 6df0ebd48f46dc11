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

#include <optional>
#include <string>
#include <vector>

#include "segcap/error.hpp"
#include "segcap/spice.hpp"
#include "segcap/units.hpp"

namespace segcap {

// All file formats are UTF-8 JSON Lines: one record per line, LF written,
// CRLF tolerated on read.

/// {"id": str, "units": [int], "frame_shift_ms"?: int, "duration_s"?: float,
///  "speaker"?: str, "durations"?: [int]}
struct UnitRecord {
  std::string id;
  std::vector<int> units;
  std::optional<int> frame_shift_ms;
  std::optional<double> duration_s;
  std::optional<std::string> speaker;
  std::optional<std::vector<int>> durations;  // parallel to units (RLE output)
};

/// {"image_id": str, "candidate_id"?: int, "caption": str}
struct CaptionRecord {
  std::string image_id;
  std::optional<int> candidate_id;
  std::string caption;
};

/// {"image_id": str, "kind": "reference"|"candidate", "candidate_id"?: int,
///  "props": [[str]...]}
struct PropRecord {
  std::string image_id;
  std::string kind;
  std::optional<int> candidate_id;
  std::vector<std::vector<std::string>> props;
};

/// {"id": str, "caption": str, "duration_s"?: float, "speaker"?: str};
/// "image_id" is accepted as an alias for "id".
struct UtteranceRecord {
  std::string id;
  std::string caption;
  std::optional<double> duration_s;
  std::optional<std::string> speaker;
};

std::string read_file(const std::string& path);

/// Writes via a temporary file in the same directory plus rename, so a
/// partial report never exists under the target name.
void atomic_write_file(const std::string& path, const std::string& content);

std::vector<UnitRecord> parse_unit_records(const std::string& text);
std::vector<CaptionRecord> parse_caption_records(const std::string& text);
std::vector<PropRecord> parse_prop_records(const std::string& text);
std::vector<UtteranceRecord> parse_utterance_records(const std::string& text);

std::vector<UnitRecord> read_unit_records(const std::string& path);
std::vector<CaptionRecord> read_caption_records(const std::string& path);
std::vector<PropRecord> read_prop_records(const std::string& path);
std::vector<UtteranceRecord> read_utterance_records(const std::string& path);

/// JSONL {"id": str} per line; the decoding context inventory.
std::vector<std::string> read_context_ids(const std::string& path);

std::string unit_records_to_jsonl(const std::vector<UnitRecord>& records);
std::string caption_records_to_jsonl(const std::vector<CaptionRecord>& records);

/// Groups proposition records into per-image reference/candidate bags.
/// Candidates are ordered by candidate_id. Throws on duplicate keys or
/// images without references/candidates when require_candidates is set.
std::vector<ImagePropositions> group_propositions(const std::vector<PropRecord>& records,
                                                  bool require_candidates = true);

// --- validation ------------------------------------------------------------

enum class FileSchema { transcript, captions, props, points };

std::optional<FileSchema> schema_from_name(std::string_view name);

struct Diagnostic {
  std::size_t line = 0;  // 0 for file-level findings
  std::string code;      // Errc name
  std::string message;
};

/// Line-numbered structural diagnostics for one file, including duplicate
/// key detection. Unreadable files throw IoError; malformed content is
/// reported, not thrown.
std::vector<Diagnostic> validate_file(const std::string& path, FileSchema schema);

/// Candidate/reference image-id sets must match exactly; the symmetric
/// difference (first 10 ids) is reported otherwise.
std::vector<Diagnostic> check_id_match(const std::vector<std::string>& candidate_ids,
                                       const std::vector<std::string>& reference_ids);

}  // namespace segcap

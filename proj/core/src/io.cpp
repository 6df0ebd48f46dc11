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

#include "segcap/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "segcap/diversity.hpp"

namespace segcap {

namespace {

using nlohmann::json;

// Applies fn(line_no, trimmed_line) to every non-empty line.
template <typename Fn>
void for_each_line(const std::string& text, Fn&& fn) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fn(line_no, line);
  }
}

json parse_line(std::size_t line_no, const std::string& line) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    fail(Errc::ParseError, "line " + std::to_string(line_no) + ": invalid JSON: " + e.what());
  }
}

[[noreturn]] void line_fail(std::size_t line_no, const std::string& what) {
  fail(Errc::ParseError, "line " + std::to_string(line_no) + ": " + what);
}

UnitRecord unit_record_from_json(std::size_t line_no, const json& doc) {
  UnitRecord record;
  if (!doc.is_object()) line_fail(line_no, "record is not a JSON object");
  if (!doc.contains("id") || !doc["id"].is_string()) line_fail(line_no, "missing string 'id'");
  record.id = doc["id"].get<std::string>();
  if (record.id.empty()) line_fail(line_no, "'id' must be nonempty");
  if (!doc.contains("units") || !doc["units"].is_array()) {
    line_fail(line_no, "missing array 'units'");
  }
  for (const auto& item : doc["units"]) {
    if (!item.is_number_integer()) line_fail(line_no, "'units' must contain integers");
    record.units.push_back(item.get<int>());
  }
  if (doc.contains("frame_shift_ms")) {
    if (!doc["frame_shift_ms"].is_number_integer() || doc["frame_shift_ms"].get<int>() <= 0) {
      line_fail(line_no, "'frame_shift_ms' must be a positive integer");
    }
    record.frame_shift_ms = doc["frame_shift_ms"].get<int>();
  }
  if (doc.contains("duration_s")) {
    if (!doc["duration_s"].is_number()) line_fail(line_no, "'duration_s' must be a number");
    record.duration_s = doc["duration_s"].get<double>();
    if (*record.duration_s < 0) line_fail(line_no, "'duration_s' must be nonnegative");
  }
  if (doc.contains("speaker")) {
    if (!doc["speaker"].is_string()) line_fail(line_no, "'speaker' must be a string");
    record.speaker = doc["speaker"].get<std::string>();
  }
  if (doc.contains("durations")) {
    if (!doc["durations"].is_array()) line_fail(line_no, "'durations' must be an array");
    std::vector<int> durations;
    for (const auto& item : doc["durations"]) {
      if (!item.is_number_integer() || item.get<int>() < 1) {
        line_fail(line_no, "'durations' must contain integers >= 1");
      }
      durations.push_back(item.get<int>());
    }
    if (durations.size() != record.units.size()) {
      line_fail(line_no, "'durations' length differs from 'units'");
    }
    record.durations = std::move(durations);
  }
  return record;
}

CaptionRecord caption_record_from_json(std::size_t line_no, const json& doc) {
  CaptionRecord record;
  if (!doc.is_object()) line_fail(line_no, "record is not a JSON object");
  if (!doc.contains("image_id") || !doc["image_id"].is_string()) {
    line_fail(line_no, "missing string 'image_id'");
  }
  record.image_id = doc["image_id"].get<std::string>();
  if (record.image_id.empty()) line_fail(line_no, "'image_id' must be nonempty");
  if (doc.contains("candidate_id")) {
    if (!doc["candidate_id"].is_number_integer()) {
      line_fail(line_no, "'candidate_id' must be an integer");
    }
    record.candidate_id = doc["candidate_id"].get<int>();
  }
  if (!doc.contains("caption") || !doc["caption"].is_string()) {
    line_fail(line_no, "missing string 'caption'");
  }
  record.caption = doc["caption"].get<std::string>();
  return record;
}

PropRecord prop_record_from_json(std::size_t line_no, const json& doc) {
  PropRecord record;
  if (!doc.is_object()) line_fail(line_no, "record is not a JSON object");
  if (!doc.contains("image_id") || !doc["image_id"].is_string()) {
    line_fail(line_no, "missing string 'image_id'");
  }
  record.image_id = doc["image_id"].get<std::string>();
  if (record.image_id.empty()) line_fail(line_no, "'image_id' must be nonempty");
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    line_fail(line_no, "missing string 'kind'");
  }
  record.kind = doc["kind"].get<std::string>();
  if (record.kind != "reference" && record.kind != "candidate") {
    line_fail(line_no, "'kind' must be \"reference\" or \"candidate\"");
  }
  if (doc.contains("candidate_id")) {
    if (!doc["candidate_id"].is_number_integer()) {
      line_fail(line_no, "'candidate_id' must be an integer");
    }
    record.candidate_id = doc["candidate_id"].get<int>();
  }
  if (record.kind == "candidate" && !record.candidate_id) {
    line_fail(line_no, "candidate records need a 'candidate_id'");
  }
  if (!doc.contains("props") || !doc["props"].is_array()) {
    line_fail(line_no, "missing array 'props'");
  }
  for (const auto& prop : doc["props"]) {
    if (!prop.is_array() || prop.empty() || prop.size() > 3) {
      line_fail(line_no, "each proposition must be an array of 1 to 3 strings");
    }
    std::vector<std::string> elements;
    for (const auto& element : prop) {
      if (!element.is_string() || element.get<std::string>().empty()) {
        line_fail(line_no, "proposition elements must be nonempty strings");
      }
      elements.push_back(element.get<std::string>());
    }
    record.props.push_back(std::move(elements));
  }
  return record;
}

UtteranceRecord utterance_record_from_json(std::size_t line_no, const json& doc) {
  UtteranceRecord record;
  if (!doc.is_object()) line_fail(line_no, "record is not a JSON object");
  if (doc.contains("id") && doc["id"].is_string()) {
    record.id = doc["id"].get<std::string>();
  } else if (doc.contains("image_id") && doc["image_id"].is_string()) {
    record.id = doc["image_id"].get<std::string>();
  } else {
    line_fail(line_no, "missing string 'id'");
  }
  if (record.id.empty()) line_fail(line_no, "'id' must be nonempty");
  if (!doc.contains("caption") || !doc["caption"].is_string()) {
    line_fail(line_no, "missing string 'caption'");
  }
  record.caption = doc["caption"].get<std::string>();
  if (doc.contains("duration_s")) {
    if (!doc["duration_s"].is_number()) line_fail(line_no, "'duration_s' must be a number");
    record.duration_s = doc["duration_s"].get<double>();
    if (*record.duration_s < 0) line_fail(line_no, "'duration_s' must be nonnegative");
  }
  if (doc.contains("speaker")) {
    if (!doc["speaker"].is_string()) line_fail(line_no, "'speaker' must be a string");
    record.speaker = doc["speaker"].get<std::string>();
  }
  return record;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) fail(Errc::IoError, "read failed: " + path);
  return buffer.str();
}

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path dir = target.parent_path();
  fs::path tmp = (dir.empty() ? fs::path(".") : dir) /
                 (target.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::IoError, "cannot open for writing: " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      fail(Errc::IoError, "write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    fail(Errc::IoError, "rename failed for " + path + ": " + ec.message());
  }
}

std::vector<UnitRecord> parse_unit_records(const std::string& text) {
  std::vector<UnitRecord> out;
  for_each_line(text, [&](std::size_t line_no, const std::string& line) {
    out.push_back(unit_record_from_json(line_no, parse_line(line_no, line)));
  });
  return out;
}

std::vector<CaptionRecord> parse_caption_records(const std::string& text) {
  std::vector<CaptionRecord> out;
  for_each_line(text, [&](std::size_t line_no, const std::string& line) {
    out.push_back(caption_record_from_json(line_no, parse_line(line_no, line)));
  });
  return out;
}

std::vector<PropRecord> parse_prop_records(const std::string& text) {
  std::vector<PropRecord> out;
  for_each_line(text, [&](std::size_t line_no, const std::string& line) {
    out.push_back(prop_record_from_json(line_no, parse_line(line_no, line)));
  });
  return out;
}

std::vector<UtteranceRecord> parse_utterance_records(const std::string& text) {
  std::vector<UtteranceRecord> out;
  for_each_line(text, [&](std::size_t line_no, const std::string& line) {
    out.push_back(utterance_record_from_json(line_no, parse_line(line_no, line)));
  });
  return out;
}

std::vector<std::string> read_context_ids(const std::string& path) {
  std::vector<std::string> out;
  for_each_line(read_file(path), [&](std::size_t line_no, const std::string& line) {
    json doc = parse_line(line_no, line);
    if (!doc.is_object() || !doc.contains("id") || !doc["id"].is_string()) {
      line_fail(line_no, "missing string 'id'");
    }
    out.push_back(doc["id"].get<std::string>());
  });
  return out;
}

std::vector<UnitRecord> read_unit_records(const std::string& path) {
  return parse_unit_records(read_file(path));
}

std::vector<CaptionRecord> read_caption_records(const std::string& path) {
  return parse_caption_records(read_file(path));
}

std::vector<PropRecord> read_prop_records(const std::string& path) {
  return parse_prop_records(read_file(path));
}

std::vector<UtteranceRecord> read_utterance_records(const std::string& path) {
  return parse_utterance_records(read_file(path));
}

std::string unit_records_to_jsonl(const std::vector<UnitRecord>& records) {
  std::string out;
  for (const UnitRecord& record : records) {
    json doc;
    doc["id"] = record.id;
    doc["units"] = record.units;
    if (record.frame_shift_ms) doc["frame_shift_ms"] = *record.frame_shift_ms;
    if (record.duration_s) doc["duration_s"] = *record.duration_s;
    if (record.speaker) doc["speaker"] = *record.speaker;
    if (record.durations) doc["durations"] = *record.durations;
    out += doc.dump();
    out += '\n';
  }
  return out;
}

std::string caption_records_to_jsonl(const std::vector<CaptionRecord>& records) {
  std::string out;
  for (const CaptionRecord& record : records) {
    json doc;
    doc["image_id"] = record.image_id;
    if (record.candidate_id) doc["candidate_id"] = *record.candidate_id;
    doc["caption"] = record.caption;
    out += doc.dump();
    out += '\n';
  }
  return out;
}

std::vector<ImagePropositions> group_propositions(const std::vector<PropRecord>& records,
                                                  bool require_candidates) {
  std::map<std::string, ImagePropositions> by_image;
  std::map<std::string, std::map<int, PropositionBag>> candidates;
  std::set<std::pair<std::string, int>> seen_candidates;

  for (const PropRecord& record : records) {
    PropositionBag bag;
    for (const auto& elements : record.props) bag.insert(Proposition(elements));
    auto& image = by_image[record.image_id];
    image.image_id = record.image_id;
    if (record.kind == "reference") {
      image.references.push_back(std::move(bag));
    } else {
      if (!seen_candidates.emplace(record.image_id, *record.candidate_id).second) {
        fail(Errc::DuplicateKey, "duplicate candidate (" + record.image_id + ", " +
                                     std::to_string(*record.candidate_id) + ")");
      }
      candidates[record.image_id][*record.candidate_id] = std::move(bag);
    }
  }

  std::vector<ImagePropositions> out;
  out.reserve(by_image.size());
  for (auto& [image_id, image] : by_image) {
    if (image.references.empty()) {
      fail(Errc::EmptyReferences, "image " + image_id + " has no reference propositions");
    }
    auto cand_it = candidates.find(image_id);
    if (cand_it != candidates.end()) {
      for (auto& [candidate_id, bag] : cand_it->second) {
        image.candidates.push_back(std::move(bag));
      }
    }
    if (require_candidates && image.candidates.empty()) {
      fail(Errc::EmptyCandidates, "image " + image_id + " has no candidate propositions");
    }
    out.push_back(std::move(image));
  }
  return out;
}

// --- validation -------------------------------------------------------------

std::optional<FileSchema> schema_from_name(std::string_view name) {
  if (name == "transcript") return FileSchema::transcript;
  if (name == "captions") return FileSchema::captions;
  if (name == "props") return FileSchema::props;
  if (name == "points") return FileSchema::points;
  return std::nullopt;
}

std::vector<Diagnostic> validate_file(const std::string& path, FileSchema schema) {
  std::string text = read_file(path);
  std::vector<Diagnostic> diagnostics;

  if (schema == FileSchema::points) {
    try {
      parse_report(text);
    } catch (const Error& e) {
      diagnostics.push_back({0, errc_name(e.code()), e.what()});
    }
    return diagnostics;
  }

  std::map<std::string, std::size_t> unit_ids;
  std::map<std::pair<std::string, long>, std::size_t> caption_keys;
  std::map<std::tuple<std::string, std::string, long>, std::size_t> prop_keys;

  for_each_line(text, [&](std::size_t line_no, const std::string& line) {
    try {
      json doc = parse_line(line_no, line);
      switch (schema) {
        case FileSchema::transcript: {
          UnitRecord record = unit_record_from_json(line_no, doc);
          auto [it, fresh] = unit_ids.emplace(record.id, line_no);
          if (!fresh) {
            diagnostics.push_back({line_no, errc_name(Errc::DuplicateKey),
                                   "duplicate id '" + record.id + "' (first at line " +
                                       std::to_string(it->second) + ")"});
          }
          break;
        }
        case FileSchema::captions: {
          CaptionRecord record = caption_record_from_json(line_no, doc);
          long cid = record.candidate_id ? *record.candidate_id : -1;
          auto [it, fresh] = caption_keys.emplace(std::make_pair(record.image_id, cid), line_no);
          if (!fresh) {
            diagnostics.push_back({line_no, errc_name(Errc::DuplicateKey),
                                   "duplicate (image_id, candidate_id) key '" + record.image_id +
                                       "' (first at line " + std::to_string(it->second) + ")"});
          }
          break;
        }
        case FileSchema::props: {
          PropRecord record = prop_record_from_json(line_no, doc);
          // reference lines may repeat per image (one per sentence)
          if (record.kind == "candidate") {
            auto key = std::make_tuple(record.image_id, record.kind,
                                       static_cast<long>(*record.candidate_id));
            auto [it, fresh] = prop_keys.emplace(key, line_no);
            if (!fresh) {
              diagnostics.push_back({line_no, errc_name(Errc::DuplicateKey),
                                     "duplicate candidate (" + record.image_id + ", " +
                                         std::to_string(*record.candidate_id) +
                                         ") (first at line " + std::to_string(it->second) + ")"});
            }
          }
          break;
        }
        case FileSchema::points:
          break;
      }
    } catch (const Error& e) {
      diagnostics.push_back({line_no, errc_name(e.code()), e.what()});
    }
  });
  return diagnostics;
}

std::vector<Diagnostic> check_id_match(const std::vector<std::string>& candidate_ids,
                                       const std::vector<std::string>& reference_ids) {
  std::set<std::string> cand(candidate_ids.begin(), candidate_ids.end());
  std::set<std::string> refs(reference_ids.begin(), reference_ids.end());
  std::vector<std::string> missing_refs, missing_cands;
  for (const std::string& id : cand) {
    if (!refs.count(id)) missing_refs.push_back(id);
  }
  for (const std::string& id : refs) {
    if (!cand.count(id)) missing_cands.push_back(id);
  }
  std::vector<Diagnostic> diagnostics;
  if (missing_refs.empty() && missing_cands.empty()) return diagnostics;

  std::string detail = "image-id sets differ;";
  std::size_t shown = 0;
  for (const std::string& id : missing_refs) {
    if (shown++ >= 10) break;
    detail += " candidate-only:" + id;
  }
  for (const std::string& id : missing_cands) {
    if (shown++ >= 10) break;
    detail += " reference-only:" + id;
  }
  diagnostics.push_back({0, errc_name(Errc::IdMismatch), detail});
  return diagnostics;
}

}  // namespace segcap

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

#include "commands.hpp"
#include "common.hpp"

namespace segcap::cli {

namespace {

UnitRecord encode_record(const UnitRecord& record, bool keep_durations) {
  FrameSeq frames{record.units, record.frame_shift_ms.value_or(40)};
  RleSeq rle = rle_encode(frames, keep_durations);

  UnitRecord out;
  out.id = record.id;
  out.frame_shift_ms = record.frame_shift_ms;
  out.duration_s = record.duration_s;
  out.speaker = record.speaker;
  out.units = rle.tokens();
  if (keep_durations) {
    std::vector<int> durations;
    durations.reserve(rle.size());
    for (const Run& run : rle.runs()) durations.push_back(*run.duration);
    out.durations = std::move(durations);
  }
  return out;
}

UnitRecord expand_record(const UnitRecord& record) {
  if (!record.durations) {
    fail(Errc::MissingDurations, "record '" + record.id + "' has no durations to expand");
  }
  std::vector<Run> runs;
  runs.reserve(record.units.size());
  for (std::size_t i = 0; i < record.units.size(); ++i) {
    runs.push_back(Run{record.units[i], (*record.durations)[i]});
  }
  FrameSeq frames = rle_expand(RleSeq::from_runs(std::move(runs)),
                               record.frame_shift_ms.value_or(40));

  UnitRecord out;
  out.id = record.id;
  out.frame_shift_ms = record.frame_shift_ms;
  out.duration_s = record.duration_s;
  out.speaker = record.speaker;
  out.units = frames.tokens;
  return out;
}

}  // namespace

void run_rle(const RleOptions& options) {
  std::vector<UnitRecord> records = read_unit_records(options.in);
  std::vector<UnitRecord> transformed;
  transformed.reserve(records.size());
  for (const UnitRecord& record : records) {
    try {
      transformed.push_back(options.expand ? expand_record(record)
                                           : encode_record(record, options.keep_durations));
    } catch (const Error& e) {
      if (e.code() == Errc::EmptySequence) {
        fail(Errc::EmptySequence, "record '" + record.id + "': empty unit sequence");
      }
      throw;
    }
  }
  write_output(options.out, unit_records_to_jsonl(transformed));
}

}  // namespace segcap::cli

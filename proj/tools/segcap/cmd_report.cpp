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

void run_report(const ReportOptions& options) {
  ReportFormat format;
  if (options.format == "csv") {
    format = ReportFormat::csv;
  } else if (options.format == "json") {
    format = ReportFormat::json;
  } else {
    fail(Errc::InvalidArgument, "unknown format '" + options.format + "'");
  }
  std::vector<CurvePoint> points = parse_report(read_file(options.points));
  write_output(options.out, render_report(points, format));
}

std::size_t run_validate(const ValidateOptions& options) {
  auto schema = schema_from_name(options.schema);
  if (!schema) fail(Errc::InvalidArgument, "unknown schema '" + options.schema + "'");

  std::size_t total = 0;
  auto report = [&](const std::string& file, const std::vector<Diagnostic>& diagnostics) {
    for (const Diagnostic& d : diagnostics) {
      std::printf("%s:%zu: %s: %s\n", file.c_str(), d.line, d.code.c_str(), d.message.c_str());
    }
    total += diagnostics.size();
  };

  if (!options.in.empty()) {
    report(options.in, validate_file(options.in, *schema));
  }
  if (!options.candidates.empty() || !options.references.empty()) {
    if (options.candidates.empty() || options.references.empty()) {
      fail(Errc::InvalidArgument, "--candidates and --references must be given together");
    }
    report(options.candidates, validate_file(options.candidates, *schema));
    report(options.references, validate_file(options.references, *schema));

    // evaluation pairs must cover exactly the same images
    auto ids_of = [&](const std::string& path) {
      std::vector<std::string> ids;
      if (*schema == FileSchema::props) {
        for (const PropRecord& record : read_prop_records(path)) ids.push_back(record.image_id);
      } else {
        for (const CaptionRecord& record : read_caption_records(path)) {
          ids.push_back(record.image_id);
        }
      }
      return ids;
    };
    try {
      report("(pair)", check_id_match(ids_of(options.candidates), ids_of(options.references)));
    } catch (const Error& e) {
      // structural problems were already reported line by line above
      if (e.code() != Errc::ParseError) throw;
    }
  }
  if (options.in.empty() && options.candidates.empty()) {
    fail(Errc::InvalidArgument, "nothing to validate: pass --in or --candidates/--references");
  }
  return total;
}

}  // namespace segcap::cli

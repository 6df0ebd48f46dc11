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

#include <json.hpp>

#include "commands.hpp"
#include "common.hpp"

namespace segcap::cli {

void run_vocab(const VocabOptions& options) {
  if (options.n < 1) fail(Errc::InvalidArgument, "n must be >= 1");
  std::vector<CandidateSet> sets =
      group_candidates(read_caption_records(options.candidates), Domain::word);
  std::size_t size =
      vocab_size(sets, static_cast<std::size_t>(options.n), options.min_count);

  nlohmann::json doc;
  doc["n"] = options.n;
  doc["min_count"] = options.min_count;
  doc["num_images"] = sets.size();
  doc["vocab_size"] = size;
  write_output(options.out, doc.dump(2) + "\n");
}

}  // namespace segcap::cli

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

#include <stdexcept>
#include <string>

namespace segcap {

/// Failure categories surfaced by the toolkit. Validation-style codes map to
/// CLI exit code 1, IoError maps to exit code 2.
enum class Errc {
  EmptySequence,
  MissingDurations,
  EmptyCorpus,
  EmptyReferences,
  EmptyCandidates,
  InsufficientCandidates,
  ModelContract,
  TooLarge,
  IdMismatch,
  DuplicateKey,
  ParseError,
  InvalidArgument,
  InvalidGrammar,
  IoError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

}  // namespace segcap

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

#include "segcap/error.hpp"

namespace segcap {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::EmptySequence: return "EmptySequence";
    case Errc::MissingDurations: return "MissingDurations";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::EmptyReferences: return "EmptyReferences";
    case Errc::EmptyCandidates: return "EmptyCandidates";
    case Errc::InsufficientCandidates: return "InsufficientCandidates";
    case Errc::ModelContract: return "ModelContract";
    case Errc::TooLarge: return "TooLarge";
    case Errc::IdMismatch: return "IdMismatch";
    case Errc::DuplicateKey: return "DuplicateKey";
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidGrammar: return "InvalidGrammar";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace segcap

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

#include <cstddef>
#include <functional>

namespace segcap {

/// Process-wide worker cap for parallel_for_indexed. 0 means "hardware
/// concurrency". Outputs never depend on this value: workers fill disjoint
/// indices and every reduction happens afterwards in index order.
void set_worker_threads(std::size_t n);
std::size_t worker_threads();

/// Runs body(i) for i in [0, count), possibly on several threads. body must
/// only write state owned by index i.
void parallel_for_indexed(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace segcap

// Copyright 2026 The fvq Authors
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

namespace fvq {

// Worker count used when a caller passes 0: FVQ_THREADS if set, else 1.
unsigned default_threads();

// Runs body(chunk) for chunk in [0, chunks) on up to `threads` workers.
// Chunk boundaries are chosen by the caller, so results reduced in chunk
// order are identical for any thread count.
void parallel_chunks(std::size_t chunks, unsigned threads,
                     const std::function<void(std::size_t)>& body);

}  // namespace fvq

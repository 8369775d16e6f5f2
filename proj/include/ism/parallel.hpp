/*
 * Copyright (c) 2026, the ism authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <thread>
#include <vector>

#include "ism/types.hpp"

namespace ism {

/// 0 means "use all available cores".
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Static range split. Callers must only use this for loops whose iterations
// write disjoint slots: every deterministic guarantee in the library relies on
// reductions happening afterwards in a fixed sequential order. Small ranges
// run inline; thread spawn costs dwarf the work below this size.
inline constexpr Index kParallelGrain = 8192;

template <typename Fn>
void parallel_for(Index n, unsigned threads, Fn&& fn) {
  threads = resolve_threads(threads);
  if (n <= 0) return;
  const Index nchunks = std::min<Index>(static_cast<Index>(threads), n);
  if (nchunks <= 1 || n < kParallelGrain) {
    fn(Index{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nchunks));
  const Index chunk = (n + nchunks - 1) / nchunks;
  for (Index c = 0; c < nchunks; ++c) {
    const Index begin = c * chunk;
    const Index end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace ism

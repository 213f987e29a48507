// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace neuronscope {

/// Worker count to use. `requested` = 0 means "hardware concurrency". The
/// NEURONSCOPE_THREADS environment variable, when set to a positive integer,
/// caps the result. Always >= 1.
std::size_t resolve_workers(std::size_t requested = 0);

/// Runs body(begin, end) over [0, count) split into contiguous chunks of at
/// most `grain` items, on up to `workers` threads. Chunk boundaries depend
/// only on (count, grain), never on the worker count, so any body that writes
/// disjoint outputs per index produces identical results for every worker
/// count. Exceptions from the body are rethrown on the calling thread.
void parallel_for(std::size_t count, std::size_t grain, std::size_t workers,
                  const std::function<void(std::size_t begin, std::size_t end)>& body);

}  // namespace neuronscope

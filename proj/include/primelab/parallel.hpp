// parallel.hpp
// Worker-count policy and a small static-partition helper. All parallel
// loops in the library write into disjoint, pre-sized output slots so the
// result never depends on the number of workers.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace primelab {

// Number of workers to use. Honors PRIMELAB_THREADS (positive integer) and
// otherwise falls back to std::thread::hardware_concurrency().
// Throws std::invalid_argument if PRIMELAB_THREADS is set but malformed.
unsigned worker_count();

// Calls body(begin, end) on contiguous chunks covering [0, n), possibly from
// several threads. Chunks are disjoint; body must only touch its own slots.
void parallel_for_chunks(std::size_t n, unsigned workers,
                         const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace primelab

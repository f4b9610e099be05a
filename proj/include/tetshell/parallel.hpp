// SPDX-License-Identifier: Apache-2.0

#ifndef TETSHELL_PARALLEL_HPP
#define TETSHELL_PARALLEL_HPP

#include <cstddef>

#include <functional>

namespace tetshell {

// Worker cap for parallel_for. 0 = hardware concurrency.
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for i in [0, n). Work items must write only to disjoint slots;
// with that discipline the result is identical for any worker count.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

// Chunked variant: fn(begin, end) over a static partition of [0, n).
void parallel_for_chunks(size_t n, const std::function<void(size_t, size_t)>& fn);

}  // namespace tetshell

#endif

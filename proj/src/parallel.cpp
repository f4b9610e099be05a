// SPDX-License-Identifier: Apache-2.0

#include "tetshell/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace tetshell {

namespace {
std::atomic<int> g_threads{0};
}

void set_thread_count(int n) { g_threads.store(n < 0 ? 0 : n); }

int thread_count() {
    int n = g_threads.load();
    if (n == 0) {
        n = int(std::thread::hardware_concurrency());
        if (n == 0) n = 1;
    }
    return n;
}

void parallel_for_chunks(size_t n, const std::function<void(size_t, size_t)>& fn) {
    if (n == 0) return;
    const size_t workers = std::min<size_t>(size_t(thread_count()), n);
    if (workers <= 1) {
        fn(0, n);
        return;
    }
    // Static partition: chunk boundaries depend only on n and worker count,
    // and each worker touches only its own range.
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const size_t chunk = (n + workers - 1) / workers;
    for (size_t w = 0; w < workers; ++w) {
        const size_t begin = w * chunk;
        const size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
    parallel_for_chunks(n, [&fn](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) fn(i);
    });
}

}  // namespace tetshell

#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace rolekit {

/// Worker count: min(hardware, ROLEKIT_THREADS if set), at least 1.
inline int thread_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("ROLEKIT_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
}

/// Runs body(first..last-1) split into contiguous chunks, one thread each.
/// Each index is visited exactly once, so per-index outputs are deterministic
/// regardless of scheduling.
inline void parallel_for(long long first, long long last,
                         const std::function<void(long long, long long)>& chunk_body) {
    long long total = last - first;
    if (total <= 0) return;
    int workers = std::min<long long>(thread_count(), total);
    if (workers <= 1) {
        chunk_body(first, last);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    long long per = total / workers, extra = total % workers, lo = first;
    for (int w = 0; w < workers; ++w) {
        long long hi = lo + per + (w < extra ? 1 : 0);
        pool.emplace_back(chunk_body, lo, hi);
        lo = hi;
    }
    for (auto& t : pool) t.join();
}

} // namespace rolekit

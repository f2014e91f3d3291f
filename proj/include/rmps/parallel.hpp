// Copyright 2026 The rmps authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace rmps {

/// Samples are processed in fixed-size chunks whose boundaries do not depend
/// on the worker count; per-chunk results are combined in chunk order, so any
/// reduction built on this is bit-identical for every worker count.
constexpr long kSampleChunk = 64;

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Runs fn(chunk_index, begin, end) over [0, total) split into kSampleChunk
/// pieces. fn must only touch state owned by its chunk index.
inline void parallel_chunks(long total, int workers,
                            const std::function<void(long, long, long)>& fn) {
    if (total <= 0) return;
    const long n_chunks = (total + kSampleChunk - 1) / kSampleChunk;
    workers = resolve_workers(workers);
    if (workers == 1 || n_chunks == 1) {
        for (long c = 0; c < n_chunks; ++c) {
            fn(c, c * kSampleChunk, std::min(total, (c + 1) * kSampleChunk));
        }
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    const int n_threads = static_cast<int>(std::min<long>(workers, n_chunks));
    pool.reserve(static_cast<size_t>(n_threads));
    std::atomic<int> error_guard{0};
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back([&]() {
            while (!failed.load(std::memory_order_relaxed)) {
                long c = next.fetch_add(1);
                if (c >= n_chunks) break;
                try {
                    fn(c, c * kSampleChunk, std::min(total, (c + 1) * kSampleChunk));
                } catch (...) {
                    if (error_guard.fetch_add(1) == 0) {
                        error = std::current_exception();
                    }
                    failed.store(true);
                }
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace rmps

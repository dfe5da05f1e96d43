/*
 * Copyright 2026 The randtest Authors
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

#ifndef RANDTEST_PARALLEL_HPP
#define RANDTEST_PARALLEL_HPP

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace randtest {

inline int resolve_workers(int requested) {
    if (requested > 0)
        return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

// Runs fn(i) for i in [0, count). Each item must write only to its own
// slot so that any schedule produces the same result as the sequential one.
template <typename Fn>
void parallel_for(std::int64_t count, int workers, Fn &&fn) {
    workers = resolve_workers(workers);
    if (workers <= 1 || count < 2) {
        for (std::int64_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        const std::int64_t grain = std::max<std::int64_t>(1, count / (8 * workers));
        for (;;) {
            std::int64_t begin = next.fetch_add(grain);
            if (begin >= count)
                return;
            std::int64_t end = std::min(begin + grain, count);
            try {
                for (std::int64_t i = begin; i < end; ++i)
                    fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w)
        pool.emplace_back(body);
    body();
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace randtest

#endif

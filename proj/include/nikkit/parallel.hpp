#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

// Opt-in parallelism. Everything in the library is serial unless the caller
// asks for threads; the NIKKIT_THREADS environment variable supplies a cap
// for callers that delegate the decision. Unset, empty, or unparsable values
// mean "serial" so that results are reproducible by default.

namespace nikkit {

inline int env_thread_cap() {
    const char* raw = std::getenv("NIKKIT_THREADS");
    if (raw == nullptr || *raw == '\0') return 1;
    char* end = nullptr;
    const long v = std::strtol(raw, &end, 10);
    if (end == raw || *end != '\0') return 1;
    if (v < 1) return 1;
    const long hw = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<int>(std::min<long>(v, std::max<long>(hw, 64)));
}

// Runs body(i) for i in [0, n). Each invocation must write only to its own
// output slot; iteration order is unspecified across threads but the slot
// discipline keeps the aggregate result deterministic. The first exception
// thrown by any body is rethrown on the calling thread.
template <class F>
inline void parallel_for(int n, int threads, F&& body) {
    if (n <= 0) return;
    const int t = std::min(threads, n);
    if (t <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(t));
    std::atomic<int> error_guard{0};
    for (int w = 0; w < t; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    body(i);
                } catch (...) {
                    if (error_guard.fetch_add(1) == 0) first_error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load() && first_error) std::rethrow_exception(first_error);
}

} // namespace nikkit

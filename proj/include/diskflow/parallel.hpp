#pragma once

// Deterministic work sharing: a fixed number of slabs independent of the
// thread count, so reductions combined in slab order give bit-identical
// results for any worker pool size. Nested calls from inside a worker run
// serially.

#include <atomic>
#include <thread>
#include <vector>

namespace diskflow {

inline int worker_count() {
    static int n = [] {
        const unsigned hw = std::thread::hardware_concurrency();
        return int(hw == 0 ? 2 : hw);
    }();
    return n;
}

namespace detail {
inline thread_local bool in_worker = false;

struct WorkerScope {
    WorkerScope() { in_worker = true; }
    ~WorkerScope() { in_worker = false; }
};
} // namespace detail

constexpr int kSlabs = 64;

// Runs fn(begin, end) over disjoint ranges covering [0, n).
template <class Fn>
void parallel_ranges(long n, Fn&& fn) {
    if (n <= 0) return;
    if (detail::in_worker || worker_count() == 1 || n < 128) {
        fn(0L, n);
        return;
    }
    std::atomic<int> next{0};
    auto body = [&] {
        detail::WorkerScope scope;
        for (;;) {
            const int s = next.fetch_add(1);
            if (s >= kSlabs) return;
            const long b = n * s / kSlabs, e = n * (s + 1) / kSlabs;
            if (b < e) fn(b, e);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < worker_count(); ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
}

// Slab-ordered reduction: slab partials combined serially in slab order.
template <class T, class Map, class Combine>
T parallel_reduce(long n, T init, Map&& map, Combine&& combine) {
    if (n <= 0) return init;
    if (detail::in_worker || worker_count() == 1 || n < 1024) {
        T acc = init;
        for (long k = 0; k < n; ++k) acc = combine(acc, map(k));
        return acc;
    }
    std::vector<T> partial(kSlabs, init);
    std::atomic<int> next{0};
    auto body = [&] {
        detail::WorkerScope scope;
        for (;;) {
            const int s = next.fetch_add(1);
            if (s >= kSlabs) return;
            const long b = n * s / kSlabs, e = n * (s + 1) / kSlabs;
            T acc = init;
            for (long k = b; k < e; ++k) acc = combine(acc, map(k));
            partial[s] = acc;
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < worker_count(); ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
    T acc = init;
    for (int s = 0; s < kSlabs; ++s) acc = combine(acc, partial[s]);
    return acc;
}

} // namespace diskflow

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace selmer {

unsigned default_workers();

// runs body(i) for i in [0, n); on failure rethrows the exception of the smallest failing index
template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& body) {
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_at = n;
    std::exception_ptr failure;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next++;
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    unsigned k = std::max(1u, workers);
    if (k > n) k = static_cast<unsigned>(std::max<std::size_t>(n, 1));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < k; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace selmer

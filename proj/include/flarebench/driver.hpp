#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "flarebench/error.hpp"

namespace flarebench {

/// Applies fn(i) for i in [0, count) across `workers` threads and returns the
/// results in index order. Work items must be independent; the output is the
/// same for any worker count.
template <typename Out, typename Fn>
std::vector<Out> parallel_map(std::size_t count, int workers, Fn fn) {
    if (workers < 1) throw ContractViolation("worker count must be >= 1");
    std::vector<Out> results(count);
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    for (std::size_t t = 0; t < n_threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < count; i += n_threads) {
                    results[i] = fn(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

}  // namespace flarebench

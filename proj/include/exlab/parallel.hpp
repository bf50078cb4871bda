#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace exlab {

/// Worker count for `requested` threads; 0 means hardware concurrency.
inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Applies fn to every input with up to `threads` workers. Output order matches
/// input order regardless of scheduling; the first exception thrown is rethrown.
template <class In, class Fn>
auto parallel_map(const std::vector<In> &inputs, Fn fn, unsigned threads)
    -> std::vector<std::invoke_result_t<Fn, const In &>> {
    using Out = std::invoke_result_t<Fn, const In &>;
    std::vector<Out> out(inputs.size());
    const unsigned workers = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(inputs.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < inputs.size(); ++i) out[i] = fn(inputs[i]);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < inputs.size(); i = next++) {
                try {
                    out[i] = fn(inputs[i]);
                } catch (...) {
                    const std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto &t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

} // namespace exlab

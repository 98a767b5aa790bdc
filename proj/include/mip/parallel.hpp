#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "mip/errors.hpp"

namespace mip {

/** Worker count to use: the smaller of the request (0 = as many as
 *  available) and the MIP_THREADS environment cap; at least 1. */
inline int resolve_threads(int requested = 0) {
    int cap = 0;
    if (const char* env = std::getenv("MIP_THREADS")) {
        try {
            cap = std::stoi(env);
        } catch (...) {
            throw invalid_input("MIP_THREADS must be a positive integer");
        }
        if (cap < 1) throw invalid_input("MIP_THREADS must be a positive integer");
    }
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    int t = requested > 0 ? requested : (cap > 0 ? cap : hw);
    if (cap > 0 && t > cap) t = cap;
    return t < 1 ? 1 : t;
}

/** Run fn(i) for i in [begin, end) on up to `threads` workers (resolved via
 *  resolve_threads).  Static striding, so any output indexed by i is
 *  deterministic regardless of the worker count. */
template <class F>
void parallel_for(int begin, int end, F&& fn, int threads = 0) {
    const int count = end - begin;
    if (count <= 0) return;
    int t = std::min(resolve_threads(threads), count);
    if (t <= 1) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(t);
    std::exception_ptr error;
    std::mutex error_mu;
    for (int w = 0; w < t; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (int i = begin + w; i < end; i += t) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (std::thread& th : workers) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace mip

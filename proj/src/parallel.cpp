#include "primelab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace primelab {

unsigned worker_count() {
    if (const char* env = std::getenv("PRIMELAB_THREADS"); env != nullptr) {
        std::string text(env);
        std::size_t used = 0;
        long value = 0;
        try {
            value = std::stol(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != text.size() || text.empty() || value <= 0 || value > 4096)
            throw std::invalid_argument("PRIMELAB_THREADS must be a positive integer, got '" + text + "'");
        return static_cast<unsigned>(value);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for_chunks(std::size_t n, unsigned workers,
                         const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    std::size_t threads = std::clamp<std::size_t>(workers, 1, n);
    if (threads == 1) {
        body(0, n);
        return;
    }
    std::size_t chunk = (n + threads - 1) / threads;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        std::size_t begin = t * chunk;
        std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, t, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace primelab

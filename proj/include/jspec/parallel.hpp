#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace jspec {

/// Runs body(begin, end, chunk) over contiguous chunks of [0, count) on up to
/// `workers` threads.  Chunk boundaries depend only on (count, chunks), so
/// callers that merge per-chunk results in chunk order are deterministic.
template <class Body>
void parallel_chunks(std::size_t count, std::size_t chunks, unsigned workers, Body&& body) {
    chunks = std::max<std::size_t>(1, std::min(chunks, count));
    const auto bounds = [&](std::size_t c) { return count * c / chunks; };
    workers = std::max(1u, workers);
    if (workers == 1 || chunks == 1) {
        for (std::size_t c = 0; c < chunks; ++c) {
            body(bounds(c), bounds(c + 1), c);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(chunks);
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t c = w; c < chunks; c += workers) {
                try {
                    body(bounds(c), bounds(c + 1), c);
                } catch (...) {
                    errors[c] = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace jspec

#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace mzo::detail {

// Static-striped parallel loop. Each index is processed exactly once and
// writes only to its own slot, so results match the serial order bit for bit.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned max_threads = 0) {
    unsigned hw = max_threads ? max_threads : std::thread::hardware_concurrency();
    if (hw < 2 || n < 4) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const unsigned nt = static_cast<unsigned>(std::min<std::size_t>(hw, n));
    std::vector<std::thread> workers;
    workers.reserve(nt);
    for (unsigned w = 0; w < nt; ++w) {
        workers.emplace_back([&, w]() {
            for (std::size_t i = w; i < n; i += nt) fn(i);
        });
    }
    for (auto& t : workers) t.join();
}

}  // namespace mzo::detail

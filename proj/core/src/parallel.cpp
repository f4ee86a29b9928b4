#include "lkpolar/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace lkpolar {

namespace {
std::atomic<int> g_override{0};

int env_cap() {
    const char* env = std::getenv("LKPOLAR_THREADS");
    if (env == nullptr || *env == '\0') return 0;
    try {
        return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
        return 0;
    }
}
}  // namespace

int worker_count() {
    if (int o = g_override.load(); o > 0) return o;
    int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (int cap = env_cap(); cap > 0) return cap;
    return hw;
}

void set_worker_count(int workers) { g_override.store(std::max(0, workers)); }

void for_each_block(std::int64_t nblocks, const std::function<void(std::int64_t)>& fn) {
    const auto workers = static_cast<std::int64_t>(std::min<std::int64_t>(worker_count(), nblocks));
    if (workers <= 1) {
        for (std::int64_t b = 0; b < nblocks; ++b) fn(b);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            std::int64_t b = next.fetch_add(1);
            if (b >= nblocks) return;
            try {
                fn(b);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(nblocks);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers - 1));
    for (std::int64_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace lkpolar

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace lkpolar {

/// Number of worker threads used by Monte-Carlo loops. Defaults to the
/// hardware concurrency, capped by the LKPOLAR_THREADS environment variable
/// or by set_worker_count(). Results never depend on this value.
int worker_count();

/// Override the worker count for this process; 0 restores the default.
void set_worker_count(int workers);

/// Run fn(block) for block = 0..nblocks-1 on the worker pool. Each block must
/// write only to its own output slot; callers reduce in block order.
void for_each_block(std::int64_t nblocks, const std::function<void(std::int64_t)>& fn);

/// Number of samples per Monte-Carlo block; fixed so block boundaries (and
/// therefore random substreams) are independent of the worker count.
inline constexpr std::int64_t kBlockSize = 4096;

/// Scalar mean/variance accumulator (Welford), mergeable in a fixed order.
struct MeanVar {
    std::int64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const MeanVar& other) {
        if (other.count == 0) return;
        if (count == 0) {
            *this = other;
            return;
        }
        auto na = static_cast<double>(count);
        auto nb = static_cast<double>(other.count);
        double delta = other.mean - mean;
        double total = na + nb;
        mean += delta * nb / total;
        m2 += other.m2 + delta * delta * na * nb / total;
        count += other.count;
    }

    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
    double std_error() const {
        return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
    }
};

}  // namespace lkpolar

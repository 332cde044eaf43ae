#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

namespace corrlab::mc {

struct Accumulator {
    double sum = 0.0, sumsq = 0.0;
    std::size_t count = 0;

    void add(double v) {
        sum += v;
        sumsq += v * v;
        ++count;
    }
    void merge(const Accumulator& o) {
        sum += o.sum;
        sumsq += o.sumsq;
        count += o.count;
    }
    double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
    double stderr_of_mean() const {
        if (count < 2) return 0.0;
        double n = static_cast<double>(count);
        double var = (sumsq - sum * sum / n) / (n - 1.0);
        return var > 0.0 ? std::sqrt(var / n) : 0.0;
    }
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

inline McEstimate finish(const Accumulator& a, std::uint64_t seed, std::uint64_t stream) {
    return McEstimate{a.mean(), a.stderr_of_mean(), a.count, seed, stream};
}

inline int& worker_count_ref() {
    static int workers = [] {
        if (const char* env = std::getenv("CORRLAB_THREADS")) {
            int w = std::atoi(env);
            if (w >= 1) return w;
        }
        return 1;
    }();
    return workers;
}

inline int worker_count() { return worker_count_ref(); }
inline void set_worker_count(int w) {
    if (w >= 1) worker_count_ref() = w;
}

constexpr std::size_t kChunkSamples = 1 << 16;

// Stream ids are pre-assigned per chunk, so results do not depend on how the
// chunks are distributed over workers.  Callers store per-chunk results by
// index and reduce in index order.
template <class ChunkFn>
void run_chunks(std::size_t nchunks, ChunkFn&& fn) {
    int workers = worker_count();
    if (workers <= 1 || nchunks <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c) fn(c);
        return;
    }
    workers = static_cast<int>(std::min<std::size_t>(workers, nchunks));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t c = static_cast<std::size_t>(w); c < nchunks; c += workers) fn(c);
        });
    for (auto& t : pool) t.join();
}

// Combined per-chunk stream id; the high bits separate logical streams.
inline std::uint64_t chunk_stream(std::uint64_t stream, std::size_t chunk) {
    return stream * 0x1000000ULL + chunk;
}

}  // namespace corrlab::mc

#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include "hpsparse/layout.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hps {

// Kernels run their chunk loop either on an OpenMP team (one worker per
// chunk) or as a plain serial loop. The serial path is the reference
// implementation; results are bitwise identical because chunks are
// independent and reductions combine per-chunk partials in fixed order.
enum class ExecMode { serial, openmp };

ExecMode exec_mode();
void set_exec_mode(ExecMode m);

namespace instr {

// Runtime instrumentation used by tests: chunk-write guards, owned-data
// hashes around scatters, collective sequence checks and an op trace.
bool enabled();
void set_enabled(bool on);
void reset();

void note_cross_chunk_write();
long long cross_chunk_writes();

void trace_op(const char* name);
std::vector<std::string> op_trace();

std::uint64_t hash_bytes(const void* data, std::size_t len);

}  // namespace instr

namespace detail {
extern std::atomic<long long> cross_chunk_writes_;
extern bool instr_enabled_;
}  // namespace detail

// Runs f(chunk_index, range) for every chunk, one worker per chunk in
// openmp mode.
template <class F>
void for_each_chunk(const ChunkMap& cm, F&& f) {
    const int k = cm.n_chunks();
#ifdef _OPENMP
    if (exec_mode() == ExecMode::openmp && k > 1) {
#pragma omp parallel for schedule(static, 1) num_threads(k)
        for (int c = 0; c < k; ++c) f(c, cm.thread_ranges[c]);
        return;
    }
#endif
    for (int c = 0; c < k; ++c) f(c, cm.thread_ranges[c]);
}

// All destination writes of chunked kernels go through this guard; the
// instrumented counter stays zero as long as no worker writes outside
// its own chunk.
inline void chunk_store(double* dest, const Range& owned, int i, double v) {
    if (detail::instr_enabled_ && !owned.contains(i)) instr::note_cross_chunk_write();
    dest[i] = v;
}

}  // namespace hps

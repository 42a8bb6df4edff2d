#include "hpsparse/exec.hpp"

#include <mutex>

namespace hps {

namespace {
ExecMode mode_ = ExecMode::openmp;
std::mutex trace_m_;
std::vector<std::string> trace_;
}  // namespace

namespace detail {
std::atomic<long long> cross_chunk_writes_{0};
bool instr_enabled_ = false;
}  // namespace detail

ExecMode exec_mode() { return mode_; }
void set_exec_mode(ExecMode m) { mode_ = m; }

namespace instr {

bool enabled() { return detail::instr_enabled_; }
void set_enabled(bool on) { detail::instr_enabled_ = on; }

void reset() {
    detail::cross_chunk_writes_.store(0);
    std::lock_guard lk(trace_m_);
    trace_.clear();
}

void note_cross_chunk_write() { detail::cross_chunk_writes_.fetch_add(1); }
long long cross_chunk_writes() { return detail::cross_chunk_writes_.load(); }

void trace_op(const char* name) {
    if (!detail::instr_enabled_) return;
    std::lock_guard lk(trace_m_);
    trace_.emplace_back(name);
}

std::vector<std::string> op_trace() {
    std::lock_guard lk(trace_m_);
    return trace_;
}

std::uint64_t hash_bytes(const void* data, std::size_t len) {
    // FNV-1a
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace instr

}  // namespace hps

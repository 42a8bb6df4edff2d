#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "hpsparse/kernels.hpp"
#include "hpsparse/layout.hpp"
#include "hpsparse/perflog.hpp"

namespace hps {

struct CollectiveTimeout : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class RankGroup;

// Handed to the per-rank body; identifies the calling rank.
struct RankCtx {
    int rank = 0;
    int n_ranks = 1;
    int threads = 1;
    RankGroup* group = nullptr;
};

// In-process rank group: one execution context (thread) per simulated
// rank, communicating through in-memory mailboxes. The interface is
// narrow so a network transport could be substituted.
class RankGroup {
  public:
    RankGroup(int n_ranks, int threads_per_rank,
              std::chrono::milliseconds timeout = std::chrono::seconds(30));

    int n_ranks() const { return n_ranks_; }
    int threads_per_rank() const { return threads_; }

    void set_recorder(PerfRecorder* rec) { recorder_ = rec; }
    PerfRecorder* recorder() const { return recorder_; }

    // Spawns one thread per rank running body, joins all, rethrows the
    // first exception raised by any rank.
    void run(const std::function<void(RankCtx&)>& body);

    void barrier(int rank);
    // Deterministic: partials summed in ascending rank order on every rank.
    double allreduce_sum(int rank, double partial);

    void send(int src, int dst, std::vector<double> payload);
    std::vector<double> recv(int src, int dst);

  private:
    struct Mailbox {
        std::mutex m;
        std::condition_variable cv;
        std::deque<std::vector<double>> q;
    };

    int n_ranks_;
    int threads_;
    std::chrono::milliseconds timeout_;
    PerfRecorder* recorder_ = nullptr;

    std::mutex barrier_m_;
    std::condition_variable barrier_cv_;
    int barrier_count_ = 0;
    std::uint64_t barrier_gen_ = 0;

    std::vector<double> reduce_slots_;
    std::vector<long long> op_seq_;  // collective discipline check

    std::vector<std::unique_ptr<Mailbox>> mailboxes_;  // [src * R + dst]
};

// Rank-distributed vector: per-rank owned slice plus a ghost buffer
// sized against a DistMatrix's ghost_cols. Held as one object since
// ranks are in-process; collective ops touch only their rank's parts.
struct DistVector {
    RowLayout layout;
    std::vector<ChunkedVector> owned;
    std::vector<ChunkedVector> ghost;
    mutable std::vector<std::uint64_t> scatter_hash;  // instrumented guard
};

// Ghost buffers sized from dm's ghost_cols; owned chunks reuse dm's maps.
DistVector make_dist_vector(const DistMatrix& dm);
// Ghost-less vector over an arbitrary layout.
DistVector make_dist_vector(const RowLayout& layout, int threads_per_rank);

// Gathers a full global copy / sets from a global array (test + driver aid).
std::vector<double> gather(const DistVector& x);
void scatter_from_global(DistVector& x, std::span<const double> global);

// Posts this rank's sends and returns; owned data must not be mutated
// until scatter_end (checked in instrumented runs).
void scatter_begin(RankCtx& ctx, const DistVector& x, const ScatterPlan& plan);
// Blocks until every ghost slot of the calling rank is filled.
void scatter_end(RankCtx& ctx, DistVector& x, const ScatterPlan& plan);

// Overlapped distributed SpMV: scatter_begin, on-diagonal multiply,
// scatter_end, off-diagonal accumulate.
void dist_spmv(RankCtx& ctx, const DistMatrix& A, DistVector& x, DistVector& y,
               const ScatterPlan& plan);

double dist_dot(RankCtx& ctx, const DistVector& x, const DistVector& y);
double dist_norm2(RankCtx& ctx, const DistVector& x);

// Per-rank local wrappers over the chunked kernels, with perf recording.
void dist_set(RankCtx& ctx, DistVector& v, double alpha);
void dist_copy(RankCtx& ctx, const DistVector& src, DistVector& dst);
void dist_scale(RankCtx& ctx, DistVector& v, double alpha);
void dist_axpy(RankCtx& ctx, DistVector& y, double alpha, const DistVector& x);
void dist_aypx(RankCtx& ctx, DistVector& y, double alpha, const DistVector& x);
void dist_waxpy(RankCtx& ctx, DistVector& w, double alpha, const DistVector& x,
                const DistVector& y);
void dist_pointwise_divide(RankCtx& ctx, DistVector& w, const DistVector& x,
                           const DistVector& y);

}  // namespace hps

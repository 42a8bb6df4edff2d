#include "hpsparse/comm.hpp"

#include <cmath>
#include <thread>

namespace hps {

using clock_t_ = std::chrono::steady_clock;

namespace {

double seconds_since(clock_t_::time_point t0) {
    return std::chrono::duration<double>(clock_t_::now() - t0).count();
}

void require_same_layout(const DistVector& a, const DistVector& b, const char* op) {
    if (a.layout != b.layout) throw std::invalid_argument(std::string(op) + ": layout mismatch");
}

}  // namespace

RankGroup::RankGroup(int n_ranks, int threads_per_rank, std::chrono::milliseconds timeout)
    : n_ranks_(n_ranks), threads_(threads_per_rank), timeout_(timeout) {
    if (n_ranks < 1 || threads_per_rank < 1)
        throw std::invalid_argument("rank group needs n_ranks >= 1 and threads >= 1");
    reduce_slots_.assign(n_ranks, 0.0);
    op_seq_.assign(n_ranks, 0);
    mailboxes_.resize(static_cast<std::size_t>(n_ranks) * n_ranks);
    for (auto& mb : mailboxes_) mb = std::make_unique<Mailbox>();
}

void RankGroup::run(const std::function<void(RankCtx&)>& body) {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(n_ranks_);
    threads.reserve(n_ranks_);
    for (int r = 0; r < n_ranks_; ++r) {
        threads.emplace_back([&, r] {
            RankCtx ctx{r, n_ranks_, threads_, this};
            try {
                body(ctx);
            } catch (...) {
                errors[r] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

void RankGroup::barrier(int rank) {
    (void)rank;
    std::unique_lock lk(barrier_m_);
    const auto gen = barrier_gen_;
    if (++barrier_count_ == n_ranks_) {
        barrier_count_ = 0;
        ++barrier_gen_;
        barrier_cv_.notify_all();
        return;
    }
    if (!barrier_cv_.wait_for(lk, timeout_, [&] { return barrier_gen_ != gen; }))
        throw CollectiveTimeout("collective barrier timed out (mismatched participation?)");
}

double RankGroup::allreduce_sum(int rank, double partial) {
    reduce_slots_[rank] = partial;
    op_seq_[rank]++;
    barrier(rank);
    if (instr::enabled()) {
        for (int r = 1; r < n_ranks_; ++r)
            if (op_seq_[r] != op_seq_[0])
                throw std::logic_error("collective sequence mismatch between ranks");
    }
    double sum = 0.0;
    for (int r = 0; r < n_ranks_; ++r) sum += reduce_slots_[r];  // rank order
    barrier(rank);  // slots may be reused only after every rank has read
    if (recorder_) recorder_->count_reduction(rank);
    return sum;
}

void RankGroup::send(int src, int dst, std::vector<double> payload) {
    Mailbox& mb = *mailboxes_[static_cast<std::size_t>(src) * n_ranks_ + dst];
    {
        std::lock_guard lk(mb.m);
        mb.q.push_back(std::move(payload));
    }
    mb.cv.notify_one();
    if (recorder_) recorder_->count_message(src);
}

std::vector<double> RankGroup::recv(int src, int dst) {
    Mailbox& mb = *mailboxes_[static_cast<std::size_t>(src) * n_ranks_ + dst];
    std::unique_lock lk(mb.m);
    if (!mb.cv.wait_for(lk, timeout_, [&] { return !mb.q.empty(); }))
        throw CollectiveTimeout("receive from rank " + std::to_string(src) + " timed out");
    std::vector<double> payload = std::move(mb.q.front());
    mb.q.pop_front();
    return payload;
}

DistVector make_dist_vector(const DistMatrix& dm) {
    DistVector x;
    x.layout = dm.layout;
    const int R = dm.n_ranks();
    x.owned.resize(R);
    x.ghost.resize(R);
    x.scatter_hash.assign(R, 0);
    for (int r = 0; r < R; ++r) {
        x.owned[r] = alloc_zeroed(dm.layout.rank_ranges[r].size(), dm.chunks[r]);
        const int ng = static_cast<int>(dm.ghost_cols[r].size());
        x.ghost[r] = alloc_zeroed(ng, chunk_ranges(ng, 1));
    }
    return x;
}

DistVector make_dist_vector(const RowLayout& layout, int threads_per_rank) {
    DistVector x;
    x.layout = layout;
    const int R = layout.n_ranks();
    x.owned.resize(R);
    x.ghost.resize(R);
    x.scatter_hash.assign(R, 0);
    for (int r = 0; r < R; ++r) {
        const int n = layout.rank_ranges[r].size();
        x.owned[r] = alloc_zeroed(n, chunk_ranges(n, threads_per_rank));
        x.ghost[r] = alloc_zeroed(0, chunk_ranges(0, 1));
    }
    return x;
}

std::vector<double> gather(const DistVector& x) {
    std::vector<double> g(static_cast<std::size_t>(x.layout.n_global));
    for (int r = 0; r < x.layout.n_ranks(); ++r) {
        const Range& range = x.layout.rank_ranges[r];
        for (int i = 0; i < range.size(); ++i) g[range.begin + i] = x.owned[r].values[i];
    }
    return g;
}

void scatter_from_global(DistVector& x, std::span<const double> global) {
    if (static_cast<int>(global.size()) != x.layout.n_global)
        throw std::invalid_argument("global array length does not match layout");
    for (int r = 0; r < x.layout.n_ranks(); ++r) {
        const Range& range = x.layout.rank_ranges[r];
        for (int i = 0; i < range.size(); ++i) x.owned[r].values[i] = global[range.begin + i];
    }
}

void scatter_begin(RankCtx& ctx, const DistVector& x, const ScatterPlan& plan) {
    instr::trace_op("scatter_begin");
    const int me = ctx.rank;
    if (instr::enabled()) {
        const auto& vals = x.owned[me].values;
        x.scatter_hash[me] = instr::hash_bytes(vals.data(), vals.size() * sizeof(double));
    }
    for (const auto& p : plan.pairs) {
        if (p.src != me) continue;
        std::vector<double> payload(p.send_local.size());
        for (std::size_t i = 0; i < p.send_local.size(); ++i)
            payload[i] = x.owned[me].values[p.send_local[i]];
        ctx.group->send(me, p.dst, std::move(payload));
    }
}

void scatter_end(RankCtx& ctx, DistVector& x, const ScatterPlan& plan) {
    instr::trace_op("scatter_end");
    const int me = ctx.rank;
    for (const auto& p : plan.pairs) {
        if (p.dst != me) continue;
        std::vector<double> payload = ctx.group->recv(p.src, me);
        if (payload.size() != p.ghost_pos.size())
            throw std::logic_error("scatter payload size mismatch");
        for (std::size_t i = 0; i < payload.size(); ++i)
            x.ghost[me].values[p.ghost_pos[i]] = payload[i];
    }
    if (instr::enabled()) {
        const auto& vals = x.owned[me].values;
        if (x.scatter_hash[me] !=
            instr::hash_bytes(vals.data(), vals.size() * sizeof(double)))
            throw std::logic_error("owned data mutated between scatter_begin and scatter_end");
    }
}

void dist_spmv(RankCtx& ctx, const DistMatrix& A, DistVector& x, DistVector& y,
               const ScatterPlan& plan) {
    instr::trace_op("dist_spmv");
    const int me = ctx.rank;
    const auto t0 = clock_t_::now();
    scatter_begin(ctx, x, plan);
    seq_spmv(A.diag[me], x.owned[me].values, y.owned[me], /*accumulate=*/false);
    scatter_end(ctx, x, plan);
    seq_spmv(A.offdiag[me], x.ghost[me].values, y.owned[me], /*accumulate=*/true);
    if (auto* rec = ctx.group->recorder())
        rec->record(me, "spmv", seconds_since(t0), me == 0 ? 2 * A.global_nnz() : 0);
}

double dist_dot(RankCtx& ctx, const DistVector& x, const DistVector& y) {
    require_same_layout(x, y, "dist_dot");
    instr::trace_op("dist_dot");
    const auto t0 = clock_t_::now();
    const double partial = vec_dot(x.owned[ctx.rank], y.owned[ctx.rank]);
    const double sum = ctx.group->allreduce_sum(ctx.rank, partial);
    if (auto* rec = ctx.group->recorder())
        rec->record(ctx.rank, "dot", seconds_since(t0),
                    ctx.rank == 0 ? 2LL * x.layout.n_global : 0);
    return sum;
}

double dist_norm2(RankCtx& ctx, const DistVector& x) {
    instr::trace_op("dist_norm2");
    const auto t0 = clock_t_::now();
    const double partial = vec_dot(x.owned[ctx.rank], x.owned[ctx.rank]);
    const double sum = ctx.group->allreduce_sum(ctx.rank, partial);
    if (auto* rec = ctx.group->recorder())
        rec->record(ctx.rank, "norm", seconds_since(t0),
                    ctx.rank == 0 ? 2LL * x.layout.n_global : 0);
    return std::sqrt(sum);
}

#define HPS_LOCAL_OP(name, flops_per_n, ...)                                      \
    do {                                                                          \
        const auto t0 = clock_t_::now();                                          \
        __VA_ARGS__;                                                              \
        if (auto* rec = ctx.group->recorder())                                    \
            rec->record(ctx.rank, name, seconds_since(t0),                        \
                        ctx.rank == 0 ? (flops_per_n) : 0);                       \
    } while (0)

void dist_set(RankCtx& ctx, DistVector& v, double alpha) {
    HPS_LOCAL_OP("set", 0, vec_set(v.owned[ctx.rank], alpha));
}

void dist_copy(RankCtx& ctx, const DistVector& src, DistVector& dst) {
    require_same_layout(src, dst, "dist_copy");
    HPS_LOCAL_OP("copy", 0, vec_copy(src.owned[ctx.rank], dst.owned[ctx.rank]));
}

void dist_scale(RankCtx& ctx, DistVector& v, double alpha) {
    HPS_LOCAL_OP("scale", 1LL * v.layout.n_global, vec_scale(v.owned[ctx.rank], alpha));
}

void dist_axpy(RankCtx& ctx, DistVector& y, double alpha, const DistVector& x) {
    require_same_layout(x, y, "dist_axpy");
    HPS_LOCAL_OP("axpy", 2LL * y.layout.n_global,
                 vec_axpy(y.owned[ctx.rank], alpha, x.owned[ctx.rank]));
}

void dist_aypx(RankCtx& ctx, DistVector& y, double alpha, const DistVector& x) {
    require_same_layout(x, y, "dist_aypx");
    HPS_LOCAL_OP("aypx", 2LL * y.layout.n_global,
                 vec_aypx(y.owned[ctx.rank], alpha, x.owned[ctx.rank]));
}

void dist_waxpy(RankCtx& ctx, DistVector& w, double alpha, const DistVector& x,
                const DistVector& y) {
    require_same_layout(x, w, "dist_waxpy");
    require_same_layout(y, w, "dist_waxpy");
    HPS_LOCAL_OP("waxpy", 2LL * w.layout.n_global,
                 vec_waxpy(w.owned[ctx.rank], alpha, x.owned[ctx.rank], y.owned[ctx.rank]));
}

void dist_pointwise_divide(RankCtx& ctx, DistVector& w, const DistVector& x,
                           const DistVector& y) {
    require_same_layout(x, w, "dist_pointwise_divide");
    require_same_layout(y, w, "dist_pointwise_divide");
    HPS_LOCAL_OP("pointwise_divide", 1LL * w.layout.n_global,
                 vec_pointwise_divide(w.owned[ctx.rank], x.owned[ctx.rank], y.owned[ctx.rank]));
}

#undef HPS_LOCAL_OP

}  // namespace hps

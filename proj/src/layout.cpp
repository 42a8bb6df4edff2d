#include "hpsparse/layout.hpp"

#include <algorithm>

namespace hps {

namespace {

std::vector<Range> balanced_split(int n, int k) {
    if (k < 1) throw std::invalid_argument("split count must be >= 1");
    std::vector<Range> out(k);
    const int base = n / k, extra = n % k;
    int pos = 0;
    for (int c = 0; c < k; ++c) {
        int len = base + (c < extra ? 1 : 0);
        out[c] = {pos, pos + len};
        pos += len;
    }
    return out;
}

}  // namespace

ChunkMap chunk_ranges(int n, int k) {
    ChunkMap cm;
    cm.n_local = n;
    cm.thread_ranges = balanced_split(n, k);
    return cm;
}

RowLayout partition_rows(int n_global, int n_ranks) {
    RowLayout l;
    l.n_global = n_global;
    l.rank_ranges = balanced_split(n_global, n_ranks);
    return l;
}

RowLayout layout_from_ranges(int n_global, std::vector<Range> ranges) {
    int pos = 0;
    for (const auto& r : ranges) {
        if (r.begin != pos || r.end < r.begin)
            throw std::invalid_argument("ranges must contiguously cover [0, n_global)");
        pos = r.end;
    }
    if (pos != n_global) throw std::invalid_argument("ranges do not cover [0, n_global)");
    RowLayout l;
    l.n_global = n_global;
    l.rank_ranges = std::move(ranges);
    return l;
}

int RowLayout::owner(int g) const {
    auto it = std::upper_bound(rank_ranges.begin(), rank_ranges.end(), g,
                               [](int v, const Range& r) { return v < r.end; });
    if (it == rank_ranges.end() || !it->contains(g))
        throw std::out_of_range("global index " + std::to_string(g) + " has no owner");
    return static_cast<int>(it - rank_ranges.begin());
}

long long DistMatrix::global_nnz() const {
    long long nnz = 0;
    for (int r = 0; r < n_ranks(); ++r) nnz += diag[r].nnz() + offdiag[r].nnz();
    return nnz;
}

DistMatrix split_dist(const CsrMatrix& m, const RowLayout& layout, int threads_per_rank) {
    if (!m.square()) throw std::invalid_argument("split_dist requires a square matrix");
    if (layout.n_global != m.n_rows)
        throw std::invalid_argument("layout dimension does not match matrix");
    if (threads_per_rank < 1) throw std::invalid_argument("threads_per_rank must be >= 1");

    DistMatrix dm;
    dm.layout = layout;
    dm.threads_per_rank = threads_per_rank;
    const int R = layout.n_ranks();
    dm.diag.resize(R);
    dm.offdiag.resize(R);
    dm.ghost_cols.resize(R);
    dm.chunks.resize(R);

    for (int r = 0; r < R; ++r) {
        const Range owned = layout.rank_ranges[r];
        std::vector<int> ghosts;
        for (int i = owned.begin; i < owned.end; ++i)
            for (int k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k)
                if (!owned.contains(m.col_idx[k])) ghosts.push_back(m.col_idx[k]);
        std::sort(ghosts.begin(), ghosts.end());
        ghosts.erase(std::unique(ghosts.begin(), ghosts.end()), ghosts.end());

        std::vector<Triplet> dt, ot;
        for (int i = owned.begin; i < owned.end; ++i)
            for (int k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) {
                const int c = m.col_idx[k];
                if (owned.contains(c)) {
                    dt.push_back({i - owned.begin, c - owned.begin, m.values[k]});
                } else {
                    int pos = static_cast<int>(
                        std::lower_bound(ghosts.begin(), ghosts.end(), c) - ghosts.begin());
                    ot.push_back({i - owned.begin, pos, m.values[k]});
                }
            }
        dm.diag[r] = csr_from_triplets(owned.size(), owned.size(), std::move(dt));
        dm.offdiag[r] =
            csr_from_triplets(owned.size(), static_cast<int>(ghosts.size()), std::move(ot));
        dm.ghost_cols[r] = std::move(ghosts);
        dm.chunks[r] = chunk_ranges(owned.size(), threads_per_rank);
    }
    return dm;
}

CsrMatrix reconstruct(const DistMatrix& dm) {
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(dm.global_nnz()));
    for (int r = 0; r < dm.n_ranks(); ++r) {
        const Range owned = dm.layout.rank_ranges[r];
        for (const auto& t : csr_to_triplets(dm.diag[r]))
            trips.push_back({t.row + owned.begin, t.col + owned.begin, t.value});
        for (const auto& t : csr_to_triplets(dm.offdiag[r]))
            trips.push_back({t.row + owned.begin, dm.ghost_cols[r][t.col], t.value});
    }
    return csr_from_triplets(dm.n_global(), dm.n_global(), std::move(trips));
}

ScatterPlan build_scatter_plan(const DistMatrix& dm) {
    ScatterPlan plan;
    const int R = dm.n_ranks();
    plan.n_ranks = R;
    // pair_of[src][dst] -> index into plan.pairs, built in (src, dst) order
    // by walking destinations' ghost lists grouped by owner.
    std::vector<std::vector<ScatterPlan::PairList>> staged(R);
    for (int dst = 0; dst < R; ++dst) {
        staged[dst].clear();
        const auto& ghosts = dm.ghost_cols[dst];
        for (int pos = 0; pos < static_cast<int>(ghosts.size()); ++pos) {
            const int g = ghosts[pos];
            const int src = dm.layout.owner(g);
            auto it = std::find_if(staged[dst].begin(), staged[dst].end(),
                                   [&](const auto& p) { return p.src == src; });
            if (it == staged[dst].end()) {
                staged[dst].push_back({src, dst, {}, {}});
                it = staged[dst].end() - 1;
            }
            it->send_local.push_back(g - dm.layout.rank_ranges[src].begin);
            it->ghost_pos.push_back(pos);
        }
    }
    for (int src = 0; src < R; ++src)
        for (int dst = 0; dst < R; ++dst)
            for (auto& p : staged[dst])
                if (p.src == src) plan.pairs.push_back(std::move(p));
    return plan;
}

GhostVolume ghost_volume(const DistMatrix& dm) {
    GhostVolume gv;
    gv.per_rank.resize(dm.n_ranks());
    for (int r = 0; r < dm.n_ranks(); ++r) {
        gv.per_rank[r] = static_cast<int>(dm.ghost_cols[r].size());
        gv.total += gv.per_rank[r];
    }
    gv.messages = build_scatter_plan(dm).n_messages();
    return gv;
}

}  // namespace hps

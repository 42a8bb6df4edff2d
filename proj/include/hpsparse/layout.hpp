#pragma once

#include <utility>
#include <vector>

#include "hpsparse/csr.hpp"

namespace hps {

struct Range {
    int begin = 0;
    int end = 0;

    int size() const { return end - begin; }
    bool contains(int i) const { return i >= begin && i < end; }
    bool operator==(const Range&) const = default;
};

// Static contiguous division of a local index range among worker threads.
// Identical for any two objects of equal (length, thread count).
struct ChunkMap {
    int n_local = 0;
    std::vector<Range> thread_ranges;

    int n_chunks() const { return static_cast<int>(thread_ranges.size()); }
    bool operator==(const ChunkMap&) const = default;
};

// First (n mod k) chunks get ceil(n/k) elements, the rest floor(n/k).
ChunkMap chunk_ranges(int n, int k);

// Contiguous block distribution of global rows over ranks.
struct RowLayout {
    int n_global = 0;
    std::vector<Range> rank_ranges;

    int n_ranks() const { return static_cast<int>(rank_ranges.size()); }
    // Rank owning global index g (binary search).
    int owner(int g) const;
    bool operator==(const RowLayout&) const = default;
};

// Balanced contiguous blocks, same split rule as chunk_ranges.
RowLayout partition_rows(int n_global, int n_ranks);

// Arbitrary contiguous cover of [0, n_global); throws if ranges do not
// form one. Used for partition sweeps; partition_rows output is always
// balanced.
RowLayout layout_from_ranges(int n_global, std::vector<Range> ranges);

// Per-rank split of a square matrix: owned rows divided into a diagonal
// block over owned columns (local indices) and an off-diagonal block
// whose column indices are positions into the sorted ghost_cols list.
struct DistMatrix {
    RowLayout layout;
    int threads_per_rank = 1;
    std::vector<CsrMatrix> diag;              // per rank, local columns
    std::vector<CsrMatrix> offdiag;           // per rank, ghost columns
    std::vector<std::vector<int>> ghost_cols; // per rank, sorted global
    std::vector<ChunkMap> chunks;             // per rank, over owned rows

    int n_ranks() const { return layout.n_ranks(); }
    int n_global() const { return layout.n_global; }
    long long global_nnz() const;
};

DistMatrix split_dist(const CsrMatrix& m, const RowLayout& layout, int threads_per_rank);

// Re-expands diag + offdiag back to a global matrix; exact inverse of
// split_dist.
CsrMatrix reconstruct(const DistMatrix& dm);

// Send/receive index lists for the ghost exchange, one entry per ordered
// rank pair with traffic. Entries sorted by (src, dst); within an entry,
// positions ascend in the destination ghost buffer.
struct ScatterPlan {
    struct PairList {
        int src = 0;
        int dst = 0;
        std::vector<int> send_local;  // indices into src's owned slice
        std::vector<int> ghost_pos;   // slots in dst's ghost buffer
    };
    int n_ranks = 1;
    std::vector<PairList> pairs;

    int n_messages() const { return static_cast<int>(pairs.size()); }
};

ScatterPlan build_scatter_plan(const DistMatrix& dm);

struct GhostVolume {
    std::vector<int> per_rank;
    long long total = 0;
    int messages = 0;
};

GhostVolume ghost_volume(const DistMatrix& dm);

}  // namespace hps

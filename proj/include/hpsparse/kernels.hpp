#pragma once

#include <span>
#include <vector>

#include "hpsparse/csr.hpp"
#include "hpsparse/exec.hpp"
#include "hpsparse/layout.hpp"

namespace hps {

// Threading is switched off for objects below size_threshold.
struct ThreadingPolicy {
    int n_threads = 1;
    int size_threshold = 0;

    int effective_chunks(int n) const {
        return (n < size_threshold) ? 1 : n_threads;
    }
};

// Contiguous vector with a static chunk schedule; every chunk is written
// only by its owning worker. owner_tag records which worker zeroed each
// chunk when instrumentation is on (the desk-scale stand-in for
// first-touch page residency).
struct ChunkedVector {
    std::vector<double> values;
    ChunkMap chunks;
    std::vector<int> owner_tag;  // filled only in instrumented runs

    int size() const { return static_cast<int>(values.size()); }
};

ChunkedVector alloc_zeroed(int n, const ThreadingPolicy& policy);
ChunkedVector alloc_zeroed(int n, const ChunkMap& chunks);

void vec_set(ChunkedVector& v, double alpha);
void vec_copy(const ChunkedVector& src, ChunkedVector& dst);
void vec_scale(ChunkedVector& v, double alpha);
void vec_conjugate(ChunkedVector& v);  // identity for real scalars

void vec_axpy(ChunkedVector& y, double alpha, const ChunkedVector& x);   // y += a*x
void vec_aypx(ChunkedVector& y, double alpha, const ChunkedVector& x);   // y = x + a*y
void vec_waxpy(ChunkedVector& w, double alpha, const ChunkedVector& x,
               const ChunkedVector& y);                                  // w = a*x + y

// Per-chunk partial sums, combined left-to-right in ascending chunk
// order: deterministic for fixed (values, chunk count).
double vec_dot(const ChunkedVector& x, const ChunkedVector& y);
double vec_norm2(const ChunkedVector& x);

void vec_pointwise_mult(ChunkedVector& w, const ChunkedVector& x, const ChunkedVector& y);
// Throws std::domain_error naming the offending index on zero divisor.
void vec_pointwise_divide(ChunkedVector& w, const ChunkedVector& x, const ChunkedVector& y);

// y = m*x (accumulate=false) or y += m*x (accumulate=true); each worker
// computes only the rows of its own chunk.
void seq_spmv(const CsrMatrix& m, std::span<const double> x, ChunkedVector& y,
              bool accumulate = false);

// d[i] = entry (i,i), 0.0 when structurally absent.
std::vector<double> mat_get_diagonal(const CsrMatrix& m);

}  // namespace hps

#include "hpsparse/kernels.hpp"

#include <cmath>

namespace hps {

namespace {

void require_same_shape(const ChunkedVector& a, const ChunkedVector& b, const char* op) {
    if (a.size() != b.size())
        throw std::invalid_argument(std::string(op) + ": length mismatch");
    if (a.chunks != b.chunks)
        throw std::invalid_argument(std::string(op) + ": chunk map mismatch");
}

}  // namespace

ChunkedVector alloc_zeroed(int n, const ChunkMap& chunks) {
    ChunkedVector v;
    v.values.assign(static_cast<std::size_t>(n), -1.0);  // overwritten below by owners
    v.chunks = chunks;
    if (instr::enabled()) v.owner_tag.assign(chunks.n_chunks(), -1);
    const bool tag = instr::enabled();
    for_each_chunk(v.chunks, [&](int c, const Range& r) {
        for (int i = r.begin; i < r.end; ++i) chunk_store(v.values.data(), r, i, 0.0);
        if (tag) v.owner_tag[c] = c;
    });
    instr::trace_op("alloc_zeroed");
    return v;
}

ChunkedVector alloc_zeroed(int n, const ThreadingPolicy& policy) {
    if (policy.n_threads < 1) throw std::invalid_argument("n_threads must be >= 1");
    return alloc_zeroed(n, chunk_ranges(n, policy.effective_chunks(n)));
}

void vec_set(ChunkedVector& v, double alpha) {
    instr::trace_op("vec_set");
    for_each_chunk(v.chunks, [&](int, const Range& r) {
        for (int i = r.begin; i < r.end; ++i) chunk_store(v.values.data(), r, i, alpha);
    });
}

void vec_copy(const ChunkedVector& src, ChunkedVector& dst) {
    require_same_shape(src, dst, "vec_copy");
    instr::trace_op("vec_copy");
    for_each_chunk(dst.chunks, [&](int, const Range& r) {
        for (int i = r.begin; i < r.end; ++i) chunk_store(dst.values.data(), r, i, src.values[i]);
    });
}

void vec_scale(ChunkedVector& v, double alpha) {
    instr::trace_op("vec_scale");
    for_each_chunk(v.chunks, [&](int, const Range& r) {
        for (int i = r.begin; i < r.end; ++i)
            chunk_store(v.values.data(), r, i, alpha * v.values[i]);
    });
}

void vec_conjugate(ChunkedVector& v) {
    // real scalars: identity, kept for interface parity
    instr::trace_op("vec_conjugate");
    for_each_chunk(v.chunks, [&](int, const Range&) {});
}

void vec_axpy(ChunkedVector& y, double alpha, const ChunkedVector& x) {
    require_same_shape(x, y, "vec_axpy");
    instr::trace_op("vec_axpy");
    for_each_chunk(y.chunks, [&](int, const Range& r) {
        for (int i = r.begin; i < r.end; ++i)
            chunk_store(y.values.data(), r, i, y.values[i] + alpha * x.values[i]);
    });
}

void vec_aypx(ChunkedVector& y, double alpha, const ChunkedVector& x) {
    require_same_shape(x, y, "vec_aypx");
    instr::trace_op("vec_aypx");
    for_each_chunk(y.chunks, [&](int, const Range& r) {
        for (int i = r.begin; i < r.end; ++i)
            chunk_store(y.values.data(), r, i, x.values[i] + alpha * y.values[i]);
    });
}

void vec_waxpy(ChunkedVector& w, double alpha, const ChunkedVector& x, const ChunkedVector& y) {
    require_same_shape(x, w, "vec_waxpy");
    require_same_shape(y, w, "vec_waxpy");
    instr::trace_op("vec_waxpy");
    for_each_chunk(w.chunks, [&](int, const Range& r) {
        for (int i = r.begin; i < r.end; ++i)
            chunk_store(w.values.data(), r, i, alpha * x.values[i] + y.values[i]);
    });
}

double vec_dot(const ChunkedVector& x, const ChunkedVector& y) {
    require_same_shape(x, y, "vec_dot");
    instr::trace_op("vec_dot");
    std::vector<double> partial(x.chunks.n_chunks(), 0.0);
    for_each_chunk(x.chunks, [&](int c, const Range& r) {
        double s = 0.0;
        for (int i = r.begin; i < r.end; ++i) s += x.values[i] * y.values[i];
        partial[c] = s;
    });
    double sum = 0.0;
    for (double p : partial) sum += p;  // ascending chunk order
    return sum;
}

double vec_norm2(const ChunkedVector& x) { return std::sqrt(vec_dot(x, x)); }

void vec_pointwise_mult(ChunkedVector& w, const ChunkedVector& x, const ChunkedVector& y) {
    require_same_shape(x, w, "vec_pointwise_mult");
    require_same_shape(y, w, "vec_pointwise_mult");
    instr::trace_op("vec_pointwise_mult");
    for_each_chunk(w.chunks, [&](int, const Range& r) {
        for (int i = r.begin; i < r.end; ++i)
            chunk_store(w.values.data(), r, i, x.values[i] * y.values[i]);
    });
}

void vec_pointwise_divide(ChunkedVector& w, const ChunkedVector& x, const ChunkedVector& y) {
    require_same_shape(x, w, "vec_pointwise_divide");
    require_same_shape(y, w, "vec_pointwise_divide");
    for (int i = 0; i < y.size(); ++i)
        if (y.values[i] == 0.0)
            throw std::domain_error("vec_pointwise_divide: zero divisor at index " +
                                    std::to_string(i));
    instr::trace_op("vec_pointwise_divide");
    for_each_chunk(w.chunks, [&](int, const Range& r) {
        for (int i = r.begin; i < r.end; ++i)
            chunk_store(w.values.data(), r, i, x.values[i] / y.values[i]);
    });
}

void seq_spmv(const CsrMatrix& m, std::span<const double> x, ChunkedVector& y, bool accumulate) {
    if (m.n_cols != static_cast<int>(x.size()))
        throw std::invalid_argument("seq_spmv: x length does not match n_cols");
    if (m.n_rows != y.size())
        throw std::invalid_argument("seq_spmv: y length does not match n_rows");
    instr::trace_op("seq_spmv");
    for_each_chunk(y.chunks, [&](int, const Range& r) {
        for (int row = r.begin; row < r.end; ++row) {
            double s = accumulate ? y.values[row] : 0.0;
            for (int k = m.row_ptr[row]; k < m.row_ptr[row + 1]; ++k)
                s += m.values[k] * x[m.col_idx[k]];
            chunk_store(y.values.data(), r, row, s);
        }
    });
}

std::vector<double> mat_get_diagonal(const CsrMatrix& m) {
    if (!m.square()) throw std::invalid_argument("mat_get_diagonal requires a square matrix");
    std::vector<double> d(m.n_rows, 0.0);
    for (int r = 0; r < m.n_rows; ++r)
        for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k)
            if (m.col_idx[k] == r) d[r] = m.values[k];
    return d;
}

}  // namespace hps

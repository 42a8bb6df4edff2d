#include "hpsparse/csr.hpp"

#include <algorithm>
#include <numeric>

namespace hps {

CsrMatrix csr_from_triplets(int n_rows, int n_cols, std::vector<Triplet> entries) {
    for (const auto& t : entries) {
        if (t.row < 0 || t.row >= n_rows || t.col < 0 || t.col >= n_cols)
            throw std::out_of_range("triplet index (" + std::to_string(t.row) + "," +
                                    std::to_string(t.col) + ") outside " +
                                    std::to_string(n_rows) + "x" + std::to_string(n_cols));
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    CsrMatrix m;
    m.n_rows = n_rows;
    m.n_cols = n_cols;
    m.row_ptr.assign(n_rows + 1, 0);
    m.col_idx.reserve(entries.size());
    m.values.reserve(entries.size());

    std::size_t i = 0;
    for (int r = 0; r < n_rows; ++r) {
        while (i < entries.size() && entries[i].row == r) {
            double v = entries[i].value;
            int c = entries[i].col;
            ++i;
            while (i < entries.size() && entries[i].row == r && entries[i].col == c) {
                v += entries[i].value;  // duplicates summed
                ++i;
            }
            m.col_idx.push_back(c);
            m.values.push_back(v);
        }
        m.row_ptr[r + 1] = static_cast<int>(m.col_idx.size());
    }
    return m;
}

std::vector<Triplet> csr_to_triplets(const CsrMatrix& m) {
    std::vector<Triplet> out;
    out.reserve(m.col_idx.size());
    for (int r = 0; r < m.n_rows; ++r)
        for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k)
            out.push_back({r, m.col_idx[k], m.values[k]});
    return out;
}

void validate_csr(const CsrMatrix& m) {
    if (m.n_rows < 0 || m.n_cols < 0) throw std::invalid_argument("negative dimension");
    if (static_cast<int>(m.row_ptr.size()) != m.n_rows + 1)
        throw std::invalid_argument("row_ptr length != n_rows + 1");
    if (m.row_ptr.front() != 0) throw std::invalid_argument("row_ptr[0] != 0");
    if (m.row_ptr.back() != static_cast<int>(m.col_idx.size()))
        throw std::invalid_argument("row_ptr[n_rows] != nnz");
    if (m.col_idx.size() != m.values.size())
        throw std::invalid_argument("col_idx/values length mismatch");
    for (int r = 0; r < m.n_rows; ++r) {
        if (m.row_ptr[r] > m.row_ptr[r + 1]) throw std::invalid_argument("row_ptr decreasing");
        for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) {
            if (m.col_idx[k] < 0 || m.col_idx[k] >= m.n_cols)
                throw std::invalid_argument("column index out of range");
            if (k > m.row_ptr[r] && m.col_idx[k] <= m.col_idx[k - 1])
                throw std::invalid_argument("columns not strictly increasing in row " +
                                            std::to_string(r));
        }
    }
}

void validate_permutation(const Permutation& p) {
    const int n = p.size();
    std::vector<char> seen(n, 0);
    for (int v : p.new_of_old) {
        if (v < 0 || v >= n || seen[v]) throw std::invalid_argument("not a bijection on [0,n)");
        seen[v] = 1;
    }
}

Permutation inverse(const Permutation& p) {
    Permutation inv;
    inv.new_of_old.resize(p.size());
    for (int i = 0; i < p.size(); ++i) inv.new_of_old[p.new_of_old[i]] = i;
    return inv;
}

int bandwidth(const CsrMatrix& m) {
    if (!m.square()) throw std::invalid_argument("bandwidth requires a square matrix");
    int bw = 0;
    for (int r = 0; r < m.n_rows; ++r)
        for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k)
            bw = std::max(bw, std::abs(r - m.col_idx[k]));
    return bw;
}

CsrMatrix permute(const CsrMatrix& m, const Permutation& p) {
    if (!m.square() || p.size() != m.n_rows)
        throw std::invalid_argument("permutation length must match matrix dimension");
    std::vector<Triplet> trips = csr_to_triplets(m);
    for (auto& t : trips) {
        t.row = p.new_of_old[t.row];
        t.col = p.new_of_old[t.col];
    }
    return csr_from_triplets(m.n_rows, m.n_cols, std::move(trips));
}

}  // namespace hps

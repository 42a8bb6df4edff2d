#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hps {

// Compressed sparse row matrix. Column indices are strictly increasing
// within each row; row_ptr has n_rows+1 entries with row_ptr[0] == 0.
struct CsrMatrix {
    int n_rows = 0;
    int n_cols = 0;
    std::vector<int> row_ptr{0};
    std::vector<int> col_idx;
    std::vector<double> values;

    int nnz() const { return static_cast<int>(col_idx.size()); }
    bool square() const { return n_rows == n_cols; }
    bool operator==(const CsrMatrix&) const = default;
};

struct Triplet {
    int row;
    int col;
    double value;

    bool operator==(const Triplet&) const = default;
};

// Builds a CSR matrix from triplets; duplicates are summed, rows sorted.
CsrMatrix csr_from_triplets(int n_rows, int n_cols, std::vector<Triplet> entries);

std::vector<Triplet> csr_to_triplets(const CsrMatrix& m);

// Throws if any structural invariant is violated.
void validate_csr(const CsrMatrix& m);

// new_of_old[i] is the new index of old index i.
struct Permutation {
    std::vector<int> new_of_old;

    int size() const { return static_cast<int>(new_of_old.size()); }
};

// Throws unless p is a bijection on [0, n).
void validate_permutation(const Permutation& p);

Permutation inverse(const Permutation& p);

// max |i - j| over stored entries; 0 for empty or diagonal-only matrices.
int bandwidth(const CsrMatrix& m);

// Symmetric permutation: entry (i, j, v) moves to (p[i], p[j], v).
CsrMatrix permute(const CsrMatrix& m, const Permutation& p);

}  // namespace hps

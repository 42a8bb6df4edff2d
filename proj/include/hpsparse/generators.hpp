#pragma once

#include <cstdint>

#include "hpsparse/csr.hpp"

namespace hps {

// 5-point Laplacian on a k x k grid (unit spacing): n = k^2, SPD,
// bandwidth k in natural ordering, nnz = 5k^2 - 4k.
CsrMatrix generate_poisson2d(int k);

// Poisson stencil plus first-order upwind convection with velocity
// (pe, pe); nonsymmetric for pe != 0.
CsrMatrix generate_convdiff2d(int k, double peclet);

// Random sparse n x n matrix, about nnz_per_row entries per row plus a
// dominant diagonal, values in [-1, 1]. Deterministic in the seed.
CsrMatrix generate_random_sparse(int n, int nnz_per_row, std::uint64_t seed);

// Tridiagonal (path-graph pattern) n x n matrix.
CsrMatrix generate_tridiagonal(int n);

// Deterministic shuffle permutation of [0, n).
Permutation random_permutation(int n, std::uint64_t seed);

}  // namespace hps

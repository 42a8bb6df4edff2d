#include "hpsparse/generators.hpp"

#include <algorithm>
#include <random>

namespace hps {

CsrMatrix generate_poisson2d(int k) {
    if (k < 2) throw std::invalid_argument("poisson2d grid size must be >= 2");
    const int n = k * k;
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(5) * n);
    auto idx = [k](int i, int j) { return i * k + j; };
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            const int row = idx(i, j);
            trips.push_back({row, row, 4.0});
            if (i > 0) trips.push_back({row, idx(i - 1, j), -1.0});
            if (i < k - 1) trips.push_back({row, idx(i + 1, j), -1.0});
            if (j > 0) trips.push_back({row, idx(i, j - 1), -1.0});
            if (j < k - 1) trips.push_back({row, idx(i, j + 1), -1.0});
        }
    return csr_from_triplets(n, n, std::move(trips));
}

CsrMatrix generate_convdiff2d(int k, double peclet) {
    if (k < 2) throw std::invalid_argument("convdiff2d grid size must be >= 2");
    const int n = k * k;
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(5) * n);
    auto idx = [k](int i, int j) { return i * k + j; };
    // diffusion stencil plus first-order upwind convection with
    // velocity (pe, pe): adds pe to the diagonal and -pe to the
    // upstream neighbor in each direction
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            const int row = idx(i, j);
            trips.push_back({row, row, 4.0 + 2.0 * peclet});
            if (i > 0) trips.push_back({row, idx(i - 1, j), -1.0 - peclet});
            if (i < k - 1) trips.push_back({row, idx(i + 1, j), -1.0});
            if (j > 0) trips.push_back({row, idx(i, j - 1), -1.0 - peclet});
            if (j < k - 1) trips.push_back({row, idx(i, j + 1), -1.0});
        }
    return csr_from_triplets(n, n, std::move(trips));
}

CsrMatrix generate_random_sparse(int n, int nnz_per_row, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> col(0, n - 1);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<Triplet> trips;
    for (int r = 0; r < n; ++r) {
        trips.push_back({r, r, val(rng) + (val(rng) < 0 ? -2.0 : 2.0)});
        for (int e = 0; e < nnz_per_row; ++e) trips.push_back({r, col(rng), val(rng)});
    }
    // duplicates collapse via summation in csr_from_triplets
    return csr_from_triplets(n, n, std::move(trips));
}

CsrMatrix generate_tridiagonal(int n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    std::vector<Triplet> trips;
    for (int i = 0; i < n; ++i) {
        trips.push_back({i, i, 2.0});
        if (i > 0) trips.push_back({i, i - 1, -1.0});
        if (i < n - 1) trips.push_back({i, i + 1, -1.0});
    }
    return csr_from_triplets(n, n, std::move(trips));
}

Permutation random_permutation(int n, std::uint64_t seed) {
    Permutation p;
    p.new_of_old.resize(n);
    for (int i = 0; i < n; ++i) p.new_of_old[i] = i;
    std::mt19937_64 rng(seed);
    std::shuffle(p.new_of_old.begin(), p.new_of_old.end(), rng);
    return p;
}

}  // namespace hps

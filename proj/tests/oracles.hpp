// Independent brute-force references used only by tests.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hpsparse/csr.hpp"

namespace oracle {

inline std::vector<std::vector<double>> to_dense(const hps::CsrMatrix& m) {
    std::vector<std::vector<double>> d(m.n_rows, std::vector<double>(m.n_cols, 0.0));
    for (int r = 0; r < m.n_rows; ++r)
        for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) d[r][m.col_idx[k]] += m.values[k];
    return d;
}

inline std::vector<double> dense_matvec(const hps::CsrMatrix& m, const std::vector<double>& x) {
    auto d = to_dense(m);
    std::vector<double> y(m.n_rows, 0.0);
    for (int r = 0; r < m.n_rows; ++r)
        for (int c = 0; c < m.n_cols; ++c) y[r] += d[r][c] * x[c];
    return y;
}

// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(const hps::CsrMatrix& m, std::vector<double> b) {
    if (m.n_rows != m.n_cols || static_cast<int>(b.size()) != m.n_rows)
        throw std::invalid_argument("dense_solve: shape mismatch");
    const int n = m.n_rows;
    auto a = to_dense(m);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0) throw std::runtime_error("dense_solve: singular matrix");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

inline double rel_two_norm_error(const std::vector<double>& got,
                                 const std::vector<double>& want) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        num += (got[i] - want[i]) * (got[i] - want[i]);
        den += want[i] * want[i];
    }
    return std::sqrt(num) / std::sqrt(den);
}

inline double max_componentwise_rel_error(const std::vector<double>& got,
                                          const std::vector<double>& want) {
    double worst = 0.0, scale = 0.0;
    for (double w : want) scale = std::max(scale, std::abs(w));
    if (scale == 0.0) scale = 1.0;
    for (std::size_t i = 0; i < got.size(); ++i)
        worst = std::max(worst, std::abs(got[i] - want[i]) / scale);
    return worst;
}

}  // namespace oracle

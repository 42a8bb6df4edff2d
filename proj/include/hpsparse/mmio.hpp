#pragma once

#include <string>

#include "hpsparse/csr.hpp"

namespace hps {

// Reads a Matrix Market coordinate file (real, general or symmetric).
// Symmetric files are mirrored into full storage when symmetry_expand is
// set, otherwise only the stored triangle is kept. Duplicate entries are
// summed; explicit zeros are kept; indices converted to 0-based.
CsrMatrix load_matrix_market(const std::string& path, bool symmetry_expand = true);

// Writes coordinate real general with full-precision values (%.17g).
void write_matrix_market(const std::string& path, const CsrMatrix& m);

// Reads a Matrix Market array file (real general, single column).
std::vector<double> load_matrix_market_vector(const std::string& path);

}  // namespace hps

#pragma once

#include "hpsparse/csr.hpp"

namespace hps {

// Reverse Cuthill-McKee ordering over the symmetrized nonzero pattern
// (diagonal ignored). Components are processed in ascending order of
// their smallest original index; within a component BFS starts from a
// pseudo-peripheral node (repeated-BFS heuristic), neighbors are
// enqueued by ascending degree with ties broken by lowest original
// index, and the visit order is reversed per component.
Permutation rcm_order(const CsrMatrix& m);

}  // namespace hps

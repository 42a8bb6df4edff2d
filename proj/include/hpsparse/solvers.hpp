#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hpsparse/comm.hpp"

namespace hps {

enum class SolverMethod { cg, gmres };
enum class PrecondKind { none, jacobi };
enum class NormType { preconditioned, unpreconditioned };

struct SolverConfig {
    SolverMethod method = SolverMethod::cg;
    double rtol = 1e-5;
    double atol = 1e-50;
    int max_iters = 10000;
    int restart = 30;  // GMRES only
    NormType norm_type = NormType::preconditioned;
    PrecondKind precond = PrecondKind::none;
};

enum class StopReason { rtol, atol, max_iters, breakdown };

std::string to_string(StopReason r);

struct SolveResult {
    bool converged = false;
    StopReason reason = StopReason::max_iters;
    int iterations = 0;
    std::vector<double> residual_history;  // length iterations + 1
    // GMRES restart boundaries: (rotation estimate, recomputed residual).
    std::vector<std::pair<double, double>> restart_checks;
};

// z = r / d elementwise; throws std::domain_error naming the global
// index if d has a zero entry (validated once at solver setup).
void jacobi_apply(RankCtx& ctx, const DistVector& d, const DistVector& r, DistVector& z);

// Preconditioned CG, x0 = 0, x overwritten with the solution. Collective:
// call from every rank of the group with the same arguments.
SolveResult cg_solve(const DistMatrix& A, const DistVector& b, const SolverConfig& cfg,
                     DistVector& x, RankGroup& group);

// Left-preconditioned restarted GMRES with modified Gram-Schmidt Arnoldi
// and Givens rotations; the rotation-maintained estimate is the
// monitored norm.
SolveResult gmres_solve(const DistMatrix& A, const DistVector& b, const SolverConfig& cfg,
                        DistVector& x, RankGroup& group);

SolveResult solve(const DistMatrix& A, const DistVector& b, const SolverConfig& cfg,
                  DistVector& x, RankGroup& group);

}  // namespace hps

#include "hpsparse/solvers.hpp"

#include <cmath>
#include <mutex>

namespace hps {

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::rtol: return "rtol";
        case StopReason::atol: return "atol";
        case StopReason::max_iters: return "max_iters";
        case StopReason::breakdown: return "breakdown";
    }
    return "unknown";
}

void jacobi_apply(RankCtx& ctx, const DistVector& d, const DistVector& r, DistVector& z) {
    instr::trace_op("jacobi_apply");
    dist_pointwise_divide(ctx, z, r, d);
}

namespace {

// Diagonal of the operator as a DistVector; zero entries rejected with
// their global index.
DistVector extract_diagonal(const DistMatrix& A) {
    DistVector d = make_dist_vector(A);
    for (int r = 0; r < A.n_ranks(); ++r) {
        std::vector<double> local = mat_get_diagonal(A.diag[r]);
        for (int i = 0; i < static_cast<int>(local.size()); ++i) {
            if (local[i] == 0.0)
                throw std::domain_error(
                    "jacobi: zero diagonal entry at global index " +
                    std::to_string(A.layout.rank_ranges[r].begin + i));
            d.owned[r].values[i] = local[i];
        }
    }
    return d;
}

struct ConvergenceTest {
    double rtol_limit = 0.0;  // rtol * initial monitored norm
    double atol = 0.0;

    bool converged(double res) const { return res <= rtol_limit || res <= atol; }
    StopReason reason(double res) const {
        return res <= atol ? StopReason::atol : StopReason::rtol;
    }
};

void validate_config(const SolverConfig& cfg) {
    if (cfg.rtol < 0 || cfg.atol < 0 || (cfg.rtol == 0 && cfg.atol == 0))
        throw std::invalid_argument("tolerances must be >= 0 and not both zero");
    if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (cfg.restart < 1) throw std::invalid_argument("restart must be >= 1");
}

// Rank 0 writes the shared result fields; all ranks compute identical
// scalar sequences so no synchronization beyond the collectives is needed.
struct SharedResult {
    SolveResult res;
    void note(int rank, double monitored) {
        if (rank == 0) res.residual_history.push_back(monitored);
    }
};

}  // namespace

SolveResult cg_solve(const DistMatrix& A, const DistVector& b, const SolverConfig& cfg,
                     DistVector& x, RankGroup& group) {
    validate_config(cfg);
    const bool use_jacobi = cfg.precond == PrecondKind::jacobi;
    DistVector d = use_jacobi ? extract_diagonal(A) : DistVector{};
    ScatterPlan plan = build_scatter_plan(A);

    DistVector r = make_dist_vector(A);
    DistVector z = make_dist_vector(A);
    DistVector p = make_dist_vector(A);
    DistVector w = make_dist_vector(A);

    SharedResult shared;

    group.run([&](RankCtx& ctx) {
        dist_set(ctx, x, 0.0);
        dist_copy(ctx, b, r);  // r = b - A*0
        if (use_jacobi)
            jacobi_apply(ctx, d, r, z);
        else
            dist_copy(ctx, r, z);
        dist_copy(ctx, z, p);

        double rz = dist_dot(ctx, r, z);
        auto monitored = [&](double rz_cur) {
            if (cfg.norm_type == NormType::preconditioned) {
                if (rz_cur < 0.0) return -1.0;  // signals breakdown
                return std::sqrt(rz_cur);
            }
            return dist_norm2(ctx, r);
        };

        double res0 = monitored(rz);
        if (res0 < 0.0) {
            if (ctx.rank == 0) {
                shared.res.reason = StopReason::breakdown;
                shared.res.residual_history.push_back(0.0);
            }
            return;
        }
        shared.note(ctx.rank, res0);
        ConvergenceTest test{cfg.rtol * res0, cfg.atol};
        if (test.converged(res0)) {
            if (ctx.rank == 0) {
                shared.res.converged = true;
                shared.res.reason = test.reason(res0);
            }
            return;
        }

        for (int it = 1; it <= cfg.max_iters; ++it) {
            dist_spmv(ctx, A, p, w, plan);
            const double pAp = dist_dot(ctx, p, w);
            if (pAp <= 0.0) {
                if (ctx.rank == 0) shared.res.reason = StopReason::breakdown;
                return;
            }
            const double alpha = rz / pAp;
            dist_axpy(ctx, x, alpha, p);
            dist_axpy(ctx, r, -alpha, w);
            if (use_jacobi)
                jacobi_apply(ctx, d, r, z);
            else
                dist_copy(ctx, r, z);
            const double rz_new = dist_dot(ctx, r, z);
            const double res = monitored(rz_new);
            if (res < 0.0) {
                if (ctx.rank == 0) shared.res.reason = StopReason::breakdown;
                return;
            }
            shared.note(ctx.rank, res);
            if (ctx.rank == 0) shared.res.iterations = it;
            if (test.converged(res)) {
                if (ctx.rank == 0) {
                    shared.res.converged = true;
                    shared.res.reason = test.reason(res);
                }
                return;
            }
            const double beta = rz_new / rz;
            rz = rz_new;
            dist_aypx(ctx, p, beta, z);  // p = z + beta*p
        }
        if (ctx.rank == 0) shared.res.reason = StopReason::max_iters;
    });

    return shared.res;
}

SolveResult gmres_solve(const DistMatrix& A, const DistVector& b, const SolverConfig& cfg,
                        DistVector& x, RankGroup& group) {
    validate_config(cfg);
    const bool use_jacobi = cfg.precond == PrecondKind::jacobi;
    DistVector d = use_jacobi ? extract_diagonal(A) : DistVector{};
    ScatterPlan plan = build_scatter_plan(A);

    const int m = cfg.restart;
    std::vector<DistVector> V(m + 1);
    for (auto& v : V) v = make_dist_vector(A);
    DistVector w = make_dist_vector(A);
    DistVector r = make_dist_vector(A);
    DistVector z = make_dist_vector(A);

    SharedResult shared;

    group.run([&](RankCtx& ctx) {
        // Hessenberg column-major (m+1) x m, Givens coefficients and rhs
        // g; per-rank copies that stay identical because every scalar
        // derives from allreduce results.
        std::vector<double> H(static_cast<std::size_t>(m + 1) * m, 0.0);
        std::vector<double> cs(m, 0.0), sn(m, 0.0), g(m + 1, 0.0), y(m, 0.0);
        auto h = [&](int i, int j) -> double& {
            return H[static_cast<std::size_t>(j) * (m + 1) + i];
        };

        dist_set(ctx, x, 0.0);

        auto precond = [&](const DistVector& in, DistVector& out) {
            if (use_jacobi)
                jacobi_apply(ctx, d, in, out);
            else
                dist_copy(ctx, in, out);
        };

        int total_it = 0;
        double tol = -1.0;  // fixed after the first residual
        bool done = false;

        while (!done) {
            // r = b - A x, z = M^{-1} r
            dist_spmv(ctx, A, x, w, plan);
            dist_waxpy(ctx, r, -1.0, w, b);
            precond(r, z);
            double beta = dist_norm2(ctx, z);

            if (tol < 0.0) {
                shared.note(ctx.rank, beta);
                tol = std::max(cfg.rtol * beta, cfg.atol);
                if (beta <= tol) {
                    if (ctx.rank == 0) {
                        shared.res.converged = true;
                        shared.res.reason =
                            beta <= cfg.atol ? StopReason::atol : StopReason::rtol;
                    }
                    return;
                }
            }
            if (beta == 0.0) {
                if (ctx.rank == 0) {
                    shared.res.converged = true;
                    shared.res.reason = StopReason::atol;
                }
                return;
            }

            dist_copy(ctx, z, V[0]);
            dist_scale(ctx, V[0], 1.0 / beta);
            std::fill(g.begin(), g.end(), 0.0);
            g[0] = beta;

            int j = 0;  // columns completed in this cycle
            bool happy = false;
            for (; j < m; ++j) {
                dist_spmv(ctx, A, V[j], w, plan);
                precond(w, z);
                // modified Gram-Schmidt
                for (int i = 0; i <= j; ++i) {
                    h(i, j) = dist_dot(ctx, z, V[i]);
                    dist_axpy(ctx, z, -h(i, j), V[i]);
                }
                h(j + 1, j) = dist_norm2(ctx, z);

                double colnorm = 0.0;
                for (int i = 0; i <= j + 1; ++i) colnorm += h(i, j) * h(i, j);
                colnorm = std::sqrt(colnorm);
                happy = h(j + 1, j) <= 1e-14 * colnorm;
                if (!happy) {
                    dist_copy(ctx, z, V[j + 1]);
                    dist_scale(ctx, V[j + 1], 1.0 / h(j + 1, j));
                }

                // apply accumulated rotations, then form the new one
                for (int i = 0; i < j; ++i) {
                    const double t = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
                    h(i + 1, j) = -sn[i] * h(i, j) + cs[i] * h(i + 1, j);
                    h(i, j) = t;
                }
                const double denom = std::hypot(h(j, j), h(j + 1, j));
                if (denom == 0.0) {
                    cs[j] = 1.0;
                    sn[j] = 0.0;
                } else {
                    cs[j] = h(j, j) / denom;
                    sn[j] = h(j + 1, j) / denom;
                }
                h(j, j) = cs[j] * h(j, j) + sn[j] * h(j + 1, j);
                h(j + 1, j) = 0.0;
                g[j + 1] = -sn[j] * g[j];
                g[j] = cs[j] * g[j];

                ++total_it;
                const double est = happy ? 0.0 : std::abs(g[j + 1]);
                shared.note(ctx.rank, est);
                if (ctx.rank == 0) shared.res.iterations = total_it;

                if (est <= tol || happy) {
                    if (ctx.rank == 0) {
                        shared.res.converged = true;
                        shared.res.reason =
                            est <= cfg.atol ? StopReason::atol : StopReason::rtol;
                    }
                    done = true;
                    ++j;
                    break;
                }
                if (total_it >= cfg.max_iters) {
                    if (ctx.rank == 0) shared.res.reason = StopReason::max_iters;
                    done = true;
                    ++j;
                    break;
                }
            }

            // back-substitute y and update x += V y
            for (int i = j - 1; i >= 0; --i) {
                double s = g[i];
                for (int k = i + 1; k < j; ++k) s -= h(i, k) * y[k];
                y[i] = s / h(i, i);
            }
            for (int i = 0; i < j; ++i) dist_axpy(ctx, x, y[i], V[i]);

            // cycle-boundary check: recompute the preconditioned residual
            // and compare with the rotation-maintained estimate
            dist_spmv(ctx, A, x, w, plan);
            dist_waxpy(ctx, r, -1.0, w, b);
            precond(r, z);
            const double true_res = dist_norm2(ctx, z);
            if (ctx.rank == 0)
                shared.res.restart_checks.emplace_back(std::abs(g[j]), true_res);
        }
    });

    return shared.res;
}

SolveResult solve(const DistMatrix& A, const DistVector& b, const SolverConfig& cfg,
                  DistVector& x, RankGroup& group) {
    return cfg.method == SolverMethod::cg ? cg_solve(A, b, cfg, x, group)
                                          : gmres_solve(A, b, cfg, x, group);
}

}  // namespace hps

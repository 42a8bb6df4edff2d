#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "hpsparse/driver.hpp"
#include "hpsparse/generators.hpp"
#include "hpsparse/mmio.hpp"

namespace {

void add_matrix_options(CLI::App* cmd, hps::RunConfig& cfg) {
    cmd->add_option("--matrix", cfg.matrix_path, "Matrix Market file");
    cmd->add_option("--gen", cfg.generator,
                    "generator spec: poisson2d:<k> | convdiff2d:<k>:<pe> | tridiag:<n> | "
                    "random:<n>:<nnz_per_row>");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << text << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid sparse linear algebra benchmark driver"};
    app.require_subcommand(1);

    hps::RunConfig cfg;
    std::string solver = "cg", pc = "jacobi", log_format = "json";

    auto* solve_cmd = app.add_subcommand("solve", "solve a linear system and log performance");
    add_matrix_options(solve_cmd, cfg);
    solve_cmd->add_option("--ranks", cfg.ranks, "simulated ranks")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--threads", cfg.threads, "worker threads per rank")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--solver", solver, "cg|gmres");
    solve_cmd->add_option("--pc", pc, "none|jacobi");
    solve_cmd->add_option("--rtol", cfg.solver.rtol, "relative tolerance");
    solve_cmd->add_option("--atol", cfg.solver.atol, "absolute tolerance");
    solve_cmd->add_option("--max-iters", cfg.solver.max_iters, "iteration cap");
    solve_cmd->add_option("--restart", cfg.solver.restart, "GMRES restart length");
    solve_cmd->add_flag("--rcm", cfg.reorder, "apply RCM reordering before solving");
    solve_cmd->add_option("--rhs", cfg.rhs, "'ones' (b = A*ones) or a Matrix Market vector file");
    solve_cmd->add_option("--log", cfg.log_path, "performance log output path");
    solve_cmd->add_option("--log-format", log_format, "json|csv");
    solve_cmd->add_option("--seed", cfg.seed, "generator seed");

    long long triad_n = 1000000;
    int triad_reps = 10, bench_threads = 4, overhead_trials = 1000, sweep_cores = 4;
    bool serial_init = false;
    std::string bench_log, sweep_matrix, sweep_gen;

    auto* triad_cmd = app.add_subcommand("triad", "STREAM Triad memory bandwidth microbenchmark");
    triad_cmd->add_option("--n", triad_n, "elements per array");
    triad_cmd->add_option("--reps", triad_reps, "passes");
    triad_cmd->add_option("--threads", bench_threads, "worker threads");
    triad_cmd->add_flag("--serial-init", serial_init, "initialize arrays serially (no first touch)");
    triad_cmd->add_option("--log", bench_log, "JSON report path");

    auto* ovh_cmd = app.add_subcommand("overhead", "fork/join cost of an empty parallel region");
    ovh_cmd->add_option("--threads", bench_threads, "worker threads");
    ovh_cmd->add_option("--trials", overhead_trials, "samples");
    ovh_cmd->add_option("--log", bench_log, "JSON report path");

    auto* sweep_cmd =
        app.add_subcommand("comm-sweep", "ghost volume across (ranks, threads) factorizations");
    sweep_cmd->add_option("--matrix", sweep_matrix, "Matrix Market file");
    sweep_cmd->add_option("--gen", sweep_gen, "generator spec");
    sweep_cmd->add_option("--cores", sweep_cores, "core budget C; all R*T = C are swept");
    sweep_cmd->add_option("--log", bench_log, "JSON report path");
    sweep_cmd->add_option("--seed", cfg.seed, "generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve_cmd) {
            if (solver == "cg")
                cfg.solver.method = hps::SolverMethod::cg;
            else if (solver == "gmres")
                cfg.solver.method = hps::SolverMethod::gmres;
            else
                throw std::invalid_argument("unknown solver: " + solver);
            if (pc == "none")
                cfg.solver.precond = hps::PrecondKind::none;
            else if (pc == "jacobi")
                cfg.solver.precond = hps::PrecondKind::jacobi;
            else
                throw std::invalid_argument("unknown preconditioner: " + pc);
            if (log_format == "json")
                cfg.log_format = hps::LogFormat::json;
            else if (log_format == "csv")
                cfg.log_format = hps::LogFormat::csv;
            else
                throw std::invalid_argument("unknown log format: " + log_format);

            hps::RunOutcome out = hps::run_solve(cfg);
            std::printf("matrix %s  n=%lld nnz=%lld  ranks=%d threads=%d\n",
                        out.log.matrix_name.c_str(), out.log.n, out.log.nnz, out.log.ranks,
                        out.log.threads);
            if (cfg.reorder)
                std::printf("rcm: bandwidth %lld -> %lld\n", out.log.bandwidth_before,
                            out.log.bandwidth_after);
            const std::string status = out.log.converged
                                           ? std::string("converged")
                                           : "NOT converged (" + out.log.reason + ")";
            std::printf("%s: %s after %d iterations, final residual %.6e\n", solver.c_str(),
                        status.c_str(), out.log.iterations, out.log.final_residual);
            std::printf("comm: %lld messages, ghost volume %lld, %lld reductions\n",
                        out.log.messages, out.log.ghost_volume, out.log.reductions);
            for (const auto& op : out.log.ops)
                std::printf("  %-18s calls=%-8lld time=%.6fs flops=%lld\n", op.name.c_str(),
                            op.calls, op.seconds, op.flops);
            return out.log.converged ? 0 : 1;
        }
        if (*triad_cmd) {
            hps::TriadReport rep = hps::run_triad(triad_n, triad_reps, !serial_init, bench_threads);
            std::printf("triad n=%lld reps=%d threads=%d %s-init: %.2f GB/s (%.4fs) %s\n", rep.n,
                        rep.reps, rep.threads, rep.parallel_init ? "parallel" : "serial",
                        rep.gbytes_per_sec, rep.seconds,
                        rep.verified ? "verified" : "VERIFICATION FAILED");
            if (!bench_log.empty()) write_text(bench_log, rep.to_json());
            return rep.verified ? 0 : 1;
        }
        if (*ovh_cmd) {
            hps::OverheadReport rep = hps::run_overhead(bench_threads, overhead_trials);
            std::printf("fork/join overhead, %d threads, %d trials: median %.3f us  min %.3f us  "
                        "max %.3f us\n",
                        rep.threads, rep.trials, rep.median_us, rep.min_us, rep.max_us);
            if (!bench_log.empty()) write_text(bench_log, rep.to_json());
            return 0;
        }
        if (*sweep_cmd) {
            hps::RunConfig mcfg;
            mcfg.matrix_path = sweep_matrix;
            mcfg.generator = sweep_gen;
            mcfg.seed = cfg.seed;
            std::string name;
            hps::CsrMatrix m = hps::make_matrix(mcfg, name);
            hps::SweepReport rep = hps::run_comm_sweep(m, sweep_cores);
            std::printf("%-6s %-8s %-12s %-9s %-9s %s\n", "ranks", "threads", "ghost_total",
                        "messages", "max_rows", "min_rows");
            for (const auto& r : rep.rows)
                std::printf("%-6d %-8d %-12lld %-9d %-9d %d\n", r.ranks, r.threads, r.ghost_total,
                            r.messages, r.max_rows_per_rank, r.min_rows_per_rank);
            if (!bench_log.empty()) write_text(bench_log, rep.to_json());
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}

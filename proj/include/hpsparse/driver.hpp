#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hpsparse/perflog.hpp"
#include "hpsparse/solvers.hpp"

namespace hps {

enum class LogFormat { json, csv };

struct RunConfig {
    std::string matrix_path;  // Matrix Market file, or
    std::string generator;    // "poisson2d:<k>" | "convdiff2d:<k>:<pe>" | "tridiag:<n>"
    int ranks = 1;
    int threads = 1;
    SolverConfig solver;
    bool reorder = false;            // apply RCM to A (and b)
    std::string rhs = "ones";        // "ones" (b = A*ones) or a vector file
    std::string log_path;
    LogFormat log_format = LogFormat::json;
    long long seed = 0;
};

CsrMatrix make_matrix(const RunConfig& cfg, std::string& name_out);

struct RunOutcome {
    PerfLog log;
    SolveResult result;
};

// Full pipeline: load/generate, optional RCM, partition, split, scatter
// plan, solve, perf log.
RunOutcome run_solve(const RunConfig& cfg);

struct TriadReport {
    long long n = 0;
    int reps = 0;
    int threads = 0;
    bool parallel_init = false;
    double seconds = 0.0;
    double gbytes_per_sec = 0.0;  // 24 bytes per element per rep
    bool verified = false;        // a[i] == b[i] + s*c[i] at checked indices

    std::string to_json() const;
};

TriadReport run_triad(long long n, int reps, bool parallel_init, int threads);

struct OverheadReport {
    int threads = 0;
    int trials = 0;
    std::vector<double> samples_us;  // one per trial
    double median_us = 0.0;
    double min_us = 0.0;
    double max_us = 0.0;

    std::string to_json() const;
};

// Times an empty chunked parallel region; report-only.
OverheadReport run_overhead(int threads, int trials);

struct SweepRow {
    int ranks = 0;
    int threads = 0;
    long long ghost_total = 0;
    int messages = 0;
    int max_rows_per_rank = 0;
    int min_rows_per_rank = 0;
};

struct SweepReport {
    std::vector<SweepRow> rows;  // R descending at fixed R*T

    std::string to_json() const;
};

// All (R, T) with R*T = cores; asserts ghost volume non-increasing as R
// decreases.
SweepReport run_comm_sweep(const CsrMatrix& m, int cores);

void write_log(const PerfLog& log, const std::string& path, LogFormat fmt);

}  // namespace hps

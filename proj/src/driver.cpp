#include "hpsparse/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "json.hpp"

#include "hpsparse/generators.hpp"
#include "hpsparse/mmio.hpp"
#include "hpsparse/rcm.hpp"

namespace hps {

namespace {

using clock_t_ = std::chrono::steady_clock;

std::vector<std::string> split_spec(const std::string& s) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t next = s.find(':', pos);
        if (next == std::string::npos) {
            parts.push_back(s.substr(pos));
            break;
        }
        parts.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
    return parts;
}

}  // namespace

CsrMatrix make_matrix(const RunConfig& cfg, std::string& name_out) {
    if (!cfg.matrix_path.empty()) {
        name_out = cfg.matrix_path;
        const auto slash = name_out.find_last_of('/');
        if (slash != std::string::npos) name_out = name_out.substr(slash + 1);
        return load_matrix_market(cfg.matrix_path);
    }
    if (cfg.generator.empty())
        throw std::invalid_argument("either a matrix file or a generator spec is required");
    name_out = cfg.generator;
    const auto parts = split_spec(cfg.generator);
    if (parts[0] == "poisson2d" && parts.size() == 2)
        return generate_poisson2d(std::stoi(parts[1]));
    if (parts[0] == "convdiff2d" && parts.size() == 3)
        return generate_convdiff2d(std::stoi(parts[1]), std::stod(parts[2]));
    if (parts[0] == "tridiag" && parts.size() == 2)
        return generate_tridiagonal(std::stoi(parts[1]));
    if (parts[0] == "random" && parts.size() == 3)
        return generate_random_sparse(std::stoi(parts[1]), std::stoi(parts[2]),
                                      static_cast<std::uint64_t>(cfg.seed));
    throw std::invalid_argument("unknown generator spec: " + cfg.generator);
}

RunOutcome run_solve(const RunConfig& cfg) {
    if (cfg.ranks < 1 || cfg.threads < 1)
        throw std::invalid_argument("ranks and threads must be >= 1");

    RunOutcome out;
    std::string name;
    CsrMatrix A = make_matrix(cfg, name);
    if (!A.square()) throw std::invalid_argument("solver pipeline needs a square matrix");
    const int n = A.n_rows;

    std::vector<double> b_global;
    if (cfg.rhs == "ones") {
        // b = A * ones
        b_global.assign(n, 0.0);
        for (int r = 0; r < n; ++r)
            for (int k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k) b_global[r] += A.values[k];
    } else {
        b_global = load_matrix_market_vector(cfg.rhs);
        if (static_cast<int>(b_global.size()) != n)
            throw std::invalid_argument("rhs length does not match matrix dimension");
    }

    out.log.rcm_applied = cfg.reorder;
    if (cfg.reorder) {
        out.log.bandwidth_before = bandwidth(A);
        Permutation p = rcm_order(A);
        A = permute(A, p);
        std::vector<double> b_new(n);
        for (int i = 0; i < n; ++i) b_new[p.new_of_old[i]] = b_global[i];
        b_global = std::move(b_new);
        out.log.bandwidth_after = bandwidth(A);
    }

    RowLayout layout = partition_rows(n, cfg.ranks);
    DistMatrix dm = split_dist(A, layout, cfg.threads);
    ScatterPlan plan = build_scatter_plan(dm);
    GhostVolume gv = ghost_volume(dm);

    DistVector b = make_dist_vector(dm);
    DistVector x = make_dist_vector(dm);
    scatter_from_global(b, b_global);

    RankGroup group(cfg.ranks, cfg.threads);
    PerfRecorder rec(cfg.ranks);
    group.set_recorder(&rec);

    out.result = solve(dm, b, cfg.solver, x, group);

    out.log.matrix_name = name;
    out.log.n = n;
    out.log.nnz = A.nnz();
    out.log.ranks = cfg.ranks;
    out.log.threads = cfg.threads;
    out.log.seed = cfg.seed;
    out.log.ops = finalize_ops(rec);
    out.log.converged = out.result.converged;
    out.log.reason = to_string(out.result.reason);
    out.log.iterations = out.result.iterations;
    out.log.final_residual =
        out.result.residual_history.empty() ? 0.0 : out.result.residual_history.back();
    out.log.residual_history = out.result.residual_history;
    out.log.messages = gv.messages;
    out.log.ghost_volume = gv.total;
    out.log.reductions = rec.reductions();

    if (!cfg.log_path.empty()) write_log(out.log, cfg.log_path, cfg.log_format);
    return out;
}

TriadReport run_triad(long long n, int reps, bool parallel_init, int threads) {
    if (n < 1) throw std::invalid_argument("triad needs n >= 1");
    if (reps < 1) throw std::invalid_argument("triad needs reps >= 1");
    TriadReport rep;
    rep.n = n;
    rep.reps = reps;
    rep.threads = threads;
    rep.parallel_init = parallel_init;

    const double s = 2.0;
    std::vector<double> a(n), b(n), c(n);
    ChunkMap cm = chunk_ranges(static_cast<int>(n), threads);

    if (parallel_init) {
        // owners fault their own pages (first-touch)
        for_each_chunk(cm, [&](int, const Range& r) {
            for (int i = r.begin; i < r.end; ++i) {
                a[i] = 0.0;
                b[i] = 1.5;
                c[i] = 0.5;
            }
        });
    } else {
        std::fill(a.begin(), a.end(), 0.0);
        std::fill(b.begin(), b.end(), 1.5);
        std::fill(c.begin(), c.end(), 0.5);
    }

    const auto t0 = clock_t_::now();
    for (int pass = 0; pass < reps; ++pass) {
        for_each_chunk(cm, [&](int, const Range& r) {
            for (int i = r.begin; i < r.end; ++i) a[i] = b[i] + s * c[i];
        });
    }
    rep.seconds = std::chrono::duration<double>(clock_t_::now() - t0).count();

    const double expected = 1.5 + s * 0.5;
    rep.verified = a[0] == expected && a[n - 1] == expected;
    const double bytes = 24.0 * static_cast<double>(n) * reps;  // 3 arrays x 8 bytes
    rep.gbytes_per_sec = rep.seconds > 0 ? bytes / rep.seconds / 1e9 : 0.0;
    return rep;
}

std::string TriadReport::to_json() const {
    nlohmann::json j{{"benchmark", "triad"},       {"n", n},
                     {"reps", reps},               {"threads", threads},
                     {"parallel_init", parallel_init}, {"seconds", seconds},
                     {"gbytes_per_sec", gbytes_per_sec}, {"verified", verified}};
    return j.dump(2);
}

OverheadReport run_overhead(int threads, int trials) {
    if (trials < 1) throw std::invalid_argument("overhead needs trials >= 1");
    OverheadReport rep;
    rep.threads = threads;
    rep.trials = trials;
    rep.samples_us.reserve(trials);
    ChunkMap cm = chunk_ranges(threads, threads);
    for (int t = 0; t < trials; ++t) {
        const auto t0 = clock_t_::now();
        for_each_chunk(cm, [](int, const Range&) {});
        rep.samples_us.push_back(
            std::chrono::duration<double, std::micro>(clock_t_::now() - t0).count());
    }
    std::vector<double> sorted = rep.samples_us;
    std::sort(sorted.begin(), sorted.end());
    rep.min_us = sorted.front();
    rep.max_us = sorted.back();
    rep.median_us = sorted[sorted.size() / 2];
    return rep;
}

std::string OverheadReport::to_json() const {
    nlohmann::json j{{"benchmark", "overhead"}, {"threads", threads}, {"trials", trials},
                     {"median_us", median_us},  {"min_us", min_us},   {"max_us", max_us},
                     {"samples_us", samples_us}};
    return j.dump(2);
}

SweepReport run_comm_sweep(const CsrMatrix& m, int cores) {
    if (cores < 1) throw std::invalid_argument("core budget must be >= 1");
    SweepReport rep;
    for (int R = cores; R >= 1; --R) {
        if (cores % R != 0) continue;
        const int T = cores / R;
        RowLayout layout = partition_rows(m.n_rows, R);
        DistMatrix dm = split_dist(m, layout, T);
        GhostVolume gv = ghost_volume(dm);
        SweepRow row;
        row.ranks = R;
        row.threads = T;
        row.ghost_total = gv.total;
        row.messages = gv.messages;
        row.max_rows_per_rank = 0;
        row.min_rows_per_rank = m.n_rows;
        for (const auto& range : layout.rank_ranges) {
            row.max_rows_per_rank = std::max(row.max_rows_per_rank, range.size());
            row.min_rows_per_rank = std::min(row.min_rows_per_rank, range.size());
        }
        if (!rep.rows.empty() && row.ghost_total > rep.rows.back().ghost_total)
            throw std::logic_error("ghost volume increased while reducing rank count");
        rep.rows.push_back(row);
    }
    return rep;
}

std::string SweepReport::to_json() const {
    nlohmann::json jrows = nlohmann::json::array();
    for (const auto& r : rows)
        jrows.push_back({{"ranks", r.ranks},
                         {"threads", r.threads},
                         {"ghost_total", r.ghost_total},
                         {"messages", r.messages},
                         {"max_rows_per_rank", r.max_rows_per_rank},
                         {"min_rows_per_rank", r.min_rows_per_rank}});
    nlohmann::json j{{"benchmark", "comm-sweep"}, {"rows", jrows}};
    return j.dump(2);
}

void write_log(const PerfLog& log, const std::string& path, LogFormat fmt) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open log path " + path);
    out << (fmt == LogFormat::json ? log.to_json() : log.to_csv());
    if (fmt == LogFormat::json) out << "\n";
}

}  // namespace hps

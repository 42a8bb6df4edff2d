#pragma once

#include <map>
#include <string>
#include <vector>

namespace hps {

// Per-rank accumulation of op counts and wall time while a collective
// pipeline runs. Call counts and analytic flops are taken from rank 0;
// seconds are reported as the max over ranks.
class PerfRecorder {
  public:
    explicit PerfRecorder(int n_ranks) : by_rank_(n_ranks), reductions_per_rank_(n_ranks, 0) {}

    void record(int rank, const std::string& op, double seconds, long long flops);
    void count_reduction(int rank);
    void count_message(int rank);

    struct Slot {
        long long calls = 0;
        double seconds = 0.0;
        long long flops = 0;
    };

    int n_ranks() const { return static_cast<int>(by_rank_.size()); }
    const std::map<std::string, Slot>& rank_slots(int rank) const { return by_rank_[rank]; }
    long long reductions() const;

  private:
    std::vector<std::map<std::string, Slot>> by_rank_;
    std::vector<long long> reductions_per_rank_{};
};

struct OpRecord {
    std::string name;
    long long calls = 0;
    double seconds = 0.0;
    long long flops = 0;

    bool operator==(const OpRecord&) const = default;
};

struct PerfLog {
    int schema = 1;

    // environment
    std::string matrix_name;
    long long n = 0;
    long long nnz = 0;
    int ranks = 1;
    int threads = 1;
    long long seed = 0;

    std::vector<OpRecord> ops;

    // solver record
    bool converged = false;
    std::string reason;
    int iterations = 0;
    double final_residual = 0.0;
    std::vector<double> residual_history;

    // comm record
    long long messages = 0;
    long long ghost_volume = 0;
    long long reductions = 0;

    // reordering record
    bool rcm_applied = false;
    long long bandwidth_before = -1;
    long long bandwidth_after = -1;

    bool operator==(const PerfLog&) const = default;

    std::string to_json() const;
    static PerfLog from_json(const std::string& text);
    std::string to_csv() const;
};

// Merges recorder slots into op records (calls/flops from rank 0,
// seconds = max over ranks), sorted by op name.
std::vector<OpRecord> finalize_ops(const PerfRecorder& rec);

}  // namespace hps

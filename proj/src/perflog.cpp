#include "hpsparse/perflog.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace hps {

void PerfRecorder::record(int rank, const std::string& op, double seconds, long long flops) {
    auto& slot = by_rank_[rank][op];
    slot.calls += 1;
    slot.seconds += seconds;
    slot.flops += flops;
}

void PerfRecorder::count_reduction(int rank) { reductions_per_rank_[rank] += 1; }

void PerfRecorder::count_message(int) {}

long long PerfRecorder::reductions() const {
    return reductions_per_rank_.empty() ? 0 : reductions_per_rank_[0];
}

std::vector<OpRecord> finalize_ops(const PerfRecorder& rec) {
    std::vector<OpRecord> out;
    for (const auto& [name, slot0] : rec.rank_slots(0)) {
        OpRecord r{name, slot0.calls, slot0.seconds, slot0.flops};
        for (int rank = 1; rank < rec.n_ranks(); ++rank) {
            auto it = rec.rank_slots(rank).find(name);
            if (it != rec.rank_slots(rank).end())
                r.seconds = std::max(r.seconds, it->second.seconds);
        }
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(),
              [](const OpRecord& a, const OpRecord& b) { return a.name < b.name; });
    return out;
}

std::string PerfLog::to_json() const {
    nlohmann::json j;
    j["schema"] = schema;
    j["env"] = {{"matrix", matrix_name}, {"n", n},       {"nnz", nnz},
                {"ranks", ranks},        {"threads", threads}, {"seed", seed}};
    j["ops"] = nlohmann::json::array();
    for (const auto& op : ops)
        j["ops"].push_back({{"name", op.name},
                            {"calls", op.calls},
                            {"seconds", op.seconds},
                            {"flops", op.flops}});
    j["solver"] = {{"converged", converged},
                   {"reason", reason},
                   {"iterations", iterations},
                   {"final_residual", final_residual},
                   {"residual_history", residual_history}};
    j["comm"] = {{"messages", messages}, {"ghost_volume", ghost_volume},
                 {"reductions", reductions}};
    j["reorder"] = {{"rcm", rcm_applied},
                    {"bandwidth_before", bandwidth_before},
                    {"bandwidth_after", bandwidth_after}};
    return j.dump(2);
}

PerfLog PerfLog::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    PerfLog log;
    log.schema = j.at("schema").get<int>();
    const auto& env = j.at("env");
    log.matrix_name = env.at("matrix").get<std::string>();
    log.n = env.at("n").get<long long>();
    log.nnz = env.at("nnz").get<long long>();
    log.ranks = env.at("ranks").get<int>();
    log.threads = env.at("threads").get<int>();
    log.seed = env.at("seed").get<long long>();
    for (const auto& op : j.at("ops"))
        log.ops.push_back({op.at("name").get<std::string>(), op.at("calls").get<long long>(),
                           op.at("seconds").get<double>(), op.at("flops").get<long long>()});
    const auto& s = j.at("solver");
    log.converged = s.at("converged").get<bool>();
    log.reason = s.at("reason").get<std::string>();
    log.iterations = s.at("iterations").get<int>();
    log.final_residual = s.at("final_residual").get<double>();
    log.residual_history = s.at("residual_history").get<std::vector<double>>();
    const auto& c = j.at("comm");
    log.messages = c.at("messages").get<long long>();
    log.ghost_volume = c.at("ghost_volume").get<long long>();
    log.reductions = c.at("reductions").get<long long>();
    const auto& r = j.at("reorder");
    log.rcm_applied = r.at("rcm").get<bool>();
    log.bandwidth_before = r.at("bandwidth_before").get<long long>();
    log.bandwidth_after = r.at("bandwidth_after").get<long long>();
    return log;
}

std::string PerfLog::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "record,key,value1,value2,value3\n";
    out << "env,schema," << schema << ",,\n";
    out << "env,matrix," << matrix_name << ",,\n";
    out << "env,n," << n << ",,\n";
    out << "env,nnz," << nnz << ",,\n";
    out << "env,ranks," << ranks << ",,\n";
    out << "env,threads," << threads << ",,\n";
    out << "env,seed," << seed << ",,\n";
    for (const auto& op : ops)
        out << "op," << op.name << "," << op.calls << "," << op.seconds << "," << op.flops
            << "\n";
    out << "solver,converged," << (converged ? 1 : 0) << ",,\n";
    out << "solver,reason," << reason << ",,\n";
    out << "solver,iterations," << iterations << ",,\n";
    out << "solver,final_residual," << final_residual << ",,\n";
    out << "comm,messages," << messages << ",,\n";
    out << "comm,ghost_volume," << ghost_volume << ",,\n";
    out << "comm,reductions," << reductions << ",,\n";
    out << "reorder,rcm," << (rcm_applied ? 1 : 0) << "," << bandwidth_before << ","
        << bandwidth_after << "\n";
    return out.str();
}

}  // namespace hps

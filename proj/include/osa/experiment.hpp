#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "osa/analysis.hpp"
#include "osa/core.hpp"
#include "osa/generators.hpp"
#include "osa/strategies.hpp"

namespace osa {

// Instance files are JSON objects {"f": [...], "c": [...]}.
nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);

struct EvaluationConfig {
    std::string policy = "fcfs";  // fcfs | optimal-dp
    std::string mode = "exact";   // exact | mc
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    int threads = 0;        // 0 = hardware default, capped by OSA_LAB_THREADS
    bool rational = false;  // exact mode: add exact fraction strings
    double log_slack = -1.0;  // >= 0 also reports the log-template bound
};

// Full evaluation report: expected cost, optimum, ratio and every
// applicable bound with a satisfied flag. Bound violations are data here,
// never errors. The config is embedded so reports are self-describing, and
// output is byte-stable for a fixed config and seed.
nlohmann::json evaluate_instance(const Instance& inst, const EvaluationConfig& cfg);

// The bound list alone.
nlohmann::json bounds_report(const Instance& inst, double log_slack = -1.0);

struct SweepPoint {
    std::size_t n;
    double entropy;
    double expected_cost;
    double std_error;
    double opt;
    double ratio;
};

// Monte Carlo FCFS ratio across instance sizes for one frequency family and
// cost kind; used to watch the ratio trend as entropy grows.
std::vector<SweepPoint> sweep_sizes(const std::vector<std::size_t>& sizes,
                                    FrequencySpec::Kind freq_kind, double freq_param,
                                    CostSpec::Kind cost_kind, std::uint64_t trials,
                                    std::uint64_t seed, int threads);

nlohmann::json sweep_to_json(const std::vector<SweepPoint>& points);
std::string sweep_to_csv(const std::vector<SweepPoint>& points);

}  // namespace osa

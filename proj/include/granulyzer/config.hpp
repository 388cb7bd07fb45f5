#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "granulyzer/model.hpp"
#include "granulyzer/simulator.hpp"
#include "granulyzer/workloads.hpp"

namespace granulyzer {

struct OutputPaths {
    std::string samples_csv;
    std::string trace_csv;
    std::string report_json;
    std::string svg;
};

// Fully-defaulted experiment description; only the workload is required.
// Unknown config keys are rejected rather than ignored.
struct ExperimentConfig {
    std::string workload;
    std::map<std::string, double> param_overrides; // applied onto the preset
    std::vector<int> ranks = {4, 8, 16, 32, 64, 128, 256};
    int phases = 8;
    std::uint64_t seed = 42;
    bool seed_set = false; // true when the file provided an explicit seed
    SchedulingMode mode = SchedulingMode::Dynamic;
    std::optional<double> penalty; // static imbalance penalty; estimated when absent
    RegimeThresholds thresholds;
    BoundaryMode boundary = BoundaryMode::Clamp;
    std::uint64_t edge_budget = TaskGraphOptions{}.edge_budget;
    OutputPaths output;

    WorkloadSpec resolve_workload() const;
};

// "4:256:x2" -> powers of two from 4 to 256; "4,8,12" -> explicit list.
std::vector<int> parse_ranks(const std::string& text);

ExperimentConfig parse_config_text(const std::string& json_text, const std::string& source_name);
ExperimentConfig load_config_file(const std::string& path);

} // namespace granulyzer

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "granulyzer/calibration.hpp"
#include "granulyzer/csv.hpp"
#include "granulyzer/decision.hpp"

namespace granulyzer {

// JSON encodings shared by cmd_fit, cmd_predict, cmd_decide and the report.

nlohmann::json models_to_json(const std::string& workload, TopologyClass topology,
                              const KernelModel& kernel, const OverheadModel& overhead,
                              const FitDiagnostics& diagnostics);

struct ModelsDocument {
    std::string workload;
    TopologyClass topology = TopologyClass::Independent;
    KernelModel kernel;
    OverheadModel overhead;
    FitDiagnostics diagnostics;
};

ModelsDocument models_from_json(const nlohmann::json& doc);
ModelsDocument load_models_file(const std::string& path);

nlohmann::json crossover_to_json(const CrossoverPrediction& p);
nlohmann::json verdict_to_json(const Verdict& v);
nlohmann::json curve_point_to_json(const CurvePoint& p);

std::string samples_to_csv_string(const std::vector<SampleRow>& rows);
std::vector<SampleRow> samples_from_csv_string(const std::string& text,
                                               const std::string& source_name);

} // namespace granulyzer

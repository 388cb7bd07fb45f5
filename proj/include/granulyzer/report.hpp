#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "granulyzer/calibration.hpp"
#include "granulyzer/config.hpp"
#include "granulyzer/decision.hpp"

namespace granulyzer {

struct ReportRow {
    int ranks = 0;
    double t_kernel_ms = 0.0;
    double t_overhead_ms = 0.0;
    Granularity g;
    double omega_pct = 0.0;
    Regime regime = Regime::Beneficial;
};

// Empirical interval between the last non-detrimental and first detrimental
// measured configuration, plus the outcome of checking the predicted P*
// against it. The check is always recorded, never assumed.
struct Bracket {
    std::optional<int> last_non_detrimental;
    std::optional<int> first_detrimental;
    std::string prediction_check; // within | adjacent | outside | no_transition | no_prediction
};

struct Report {
    std::string workload;
    TopologyClass topology = TopologyClass::Independent;
    std::uint64_t seed = 0;
    int phases = 0;
    double penalty = 1.0;
    bool penalty_estimated = false;
    std::vector<ReportRow> rows;
    KernelModel kernel;
    OverheadModel overhead;
    FitDiagnostics diagnostics;
    CrossoverPrediction crossover;
    std::vector<Verdict> verdicts;
    std::optional<int> flip_point;
    Bracket bracket;
    std::string samples_csv; // embedded so the report is self-contained
};

// Full pipeline: dynamic sweep -> calibrate -> predict -> decide. A static
// sweep with the same seed provides the default imbalance-penalty estimate
// (static kernel over dynamic kernel at the smallest P).
Report build_report(const ExperimentConfig& config);

// Bracket check used by the report and tests: "within" when p_star lies in
// [last_non_detrimental, first_detrimental], "adjacent" when it lies within
// one sweep point outside that interval.
Bracket check_bracket(const std::vector<ReportRow>& rows, const std::vector<int>& ranks,
                      const CrossoverPrediction& prediction);

nlohmann::json report_to_json(const Report& report);

} // namespace granulyzer

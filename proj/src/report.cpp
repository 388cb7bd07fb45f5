#include "granulyzer/report.hpp"

#include <algorithm>
#include <cmath>

#include "granulyzer/errors.hpp"
#include "granulyzer/serialization.hpp"
#include "granulyzer/simulator.hpp"

namespace granulyzer {

using nlohmann::json;

namespace {

std::vector<ReportRow> rows_from_samples(const std::vector<ScalingSample>& samples,
                                         RegimeThresholds thresholds) {
    std::vector<ReportRow> rows;
    rows.reserve(samples.size());
    for (const auto& s : samples) {
        ReportRow r;
        r.ranks = s.ranks;
        r.t_kernel_ms = s.t_kernel_ms;
        r.t_overhead_ms = s.t_overhead_ms;
        r.g = granularity({s.t_kernel_ms, s.t_overhead_ms});
        r.omega_pct = overhead_fraction_percent(r.g);
        r.regime = classify_regime(r.g, thresholds);
        rows.push_back(r);
    }
    return rows;
}

} // namespace

Bracket check_bracket(const std::vector<ReportRow>& rows, const std::vector<int>& ranks,
                      const CrossoverPrediction& prediction) {
    Bracket b;
    for (const auto& r : rows) {
        if (r.regime == Regime::Detrimental) {
            b.first_detrimental = r.ranks;
            break;
        }
        b.last_non_detrimental = r.ranks;
    }
    if (!b.first_detrimental) {
        b.prediction_check = "no_transition";
        return b;
    }
    if (!prediction.exists_in_range || !std::isfinite(prediction.p_star)) {
        b.prediction_check = "no_prediction";
        return b;
    }
    const double p = prediction.p_star;
    const double lo = b.last_non_detrimental ? static_cast<double>(*b.last_non_detrimental) : 0.0;
    const double hi = static_cast<double>(*b.first_detrimental);
    if (p >= lo && p <= hi) {
        b.prediction_check = "within";
        return b;
    }
    // One sweep point of slack on either side.
    double lo_adj = lo;
    double hi_adj = hi;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        if (b.last_non_detrimental && ranks[i] == *b.last_non_detrimental && i > 0) {
            lo_adj = static_cast<double>(ranks[i - 1]);
        }
        if (ranks[i] == *b.first_detrimental && i + 1 < ranks.size()) {
            hi_adj = static_cast<double>(ranks[i + 1]);
        }
    }
    if (!b.last_non_detrimental) lo_adj = 0.0;
    b.prediction_check = (p >= lo_adj && p <= hi_adj) ? "adjacent" : "outside";
    return b;
}

Report build_report(const ExperimentConfig& config) {
    const WorkloadSpec spec = config.resolve_workload();
    TaskGraphOptions graph;
    graph.boundary = config.boundary;
    graph.edge_budget = config.edge_budget;

    const std::vector<ScalingSample> dynamic_samples =
        run_sweep(spec, config.ranks, config.phases, config.seed, SchedulingMode::Dynamic, graph);

    Report report;
    report.workload = spec.name;
    report.topology = spec.topology;
    report.seed = config.seed;
    report.phases = config.phases;
    report.rows = rows_from_samples(dynamic_samples, config.thresholds);

    const CalibrationResult calib = calibrate(spec.topology, dynamic_samples);
    report.kernel = calib.kernel;
    report.overhead = calib.overhead;
    report.diagnostics = calib.diagnostics;
    report.crossover = predict_crossover(calib.overhead, calib.kernel, config.ranks.back());

    if (config.penalty) {
        report.penalty = *config.penalty;
        report.penalty_estimated = false;
    } else {
        // Default: static/dynamic kernel ratio at the smallest sweep point.
        const std::vector<ScalingSample> static_samples = run_sweep(
            spec, {config.ranks.front()}, config.phases, config.seed, SchedulingMode::Static, graph);
        const double ratio = static_samples.front().t_kernel_ms / dynamic_samples.front().t_kernel_ms;
        report.penalty = std::max(1.0, ratio);
        report.penalty_estimated = true;
    }

    report.verdicts.reserve(config.ranks.size());
    for (int p : config.ranks) {
        const double static_hat = static_time(spec, p, report.penalty);
        report.verdicts.push_back(decide(static_hat, calib.kernel, calib.overhead, p));
    }
    report.flip_point = decision_flip_point(report.verdicts);
    report.bracket = check_bracket(report.rows, config.ranks, report.crossover);

    std::vector<SampleRow> sample_rows;
    sample_rows.reserve(dynamic_samples.size());
    for (const auto& s : dynamic_samples) {
        sample_rows.push_back({spec.name, spec.topology, s});
    }
    report.samples_csv = samples_to_csv_string(sample_rows);
    return report;
}

json report_to_json(const Report& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        json row = {
            {"P", r.ranks},
            {"t_kernel_ms", r.t_kernel_ms},
            {"t_overhead_ms", r.t_overhead_ms},
            {"omega_pct", r.omega_pct},
            {"regime", to_string(r.regime)},
        };
        if (r.g.is_unbounded()) {
            row["g"] = nullptr;
        } else {
            row["g"] = r.g.value;
        }
        rows.push_back(row);
    }
    json verdicts = json::array();
    for (const auto& v : report.verdicts) {
        verdicts.push_back(verdict_to_json(v));
    }
    json bracket = {
        {"prediction_check", report.bracket.prediction_check},
    };
    bracket["last_non_detrimental"] = report.bracket.last_non_detrimental
                                          ? json(*report.bracket.last_non_detrimental)
                                          : json(nullptr);
    bracket["first_detrimental"] = report.bracket.first_detrimental
                                       ? json(*report.bracket.first_detrimental)
                                       : json(nullptr);

    json doc = {
        {"workload", report.workload},
        {"topology", to_string(report.topology)},
        {"seed", report.seed},
        {"phases", report.phases},
        {"penalty", report.penalty},
        {"penalty_estimated", report.penalty_estimated},
        {"table", rows},
        {"models", models_to_json(report.workload, report.topology, report.kernel, report.overhead,
                                  report.diagnostics)},
        {"crossover", crossover_to_json(report.crossover)},
        {"verdicts", verdicts},
        {"bracket", bracket},
        {"samples_csv", report.samples_csv},
    };
    doc["flip_point"] = report.flip_point ? json(*report.flip_point) : json(nullptr);
    return doc;
}

} // namespace granulyzer

#include "granulyzer/cli.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "granulyzer/config.hpp"
#include "granulyzer/csv.hpp"
#include "granulyzer/errors.hpp"
#include "granulyzer/report.hpp"
#include "granulyzer/serialization.hpp"
#include "granulyzer/svg.hpp"

namespace granulyzer {

namespace {

using nlohmann::json;

struct SweepOptions {
    std::string workload;
    std::string ranks_text;
    int phases = -1;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string mode_text;
    std::vector<std::string> set_params;
    std::string config_path;
    std::string out_csv;
    std::string trace_csv;
    std::string svg_path;
    std::string boundary_text;
};

std::optional<std::uint64_t> env_seed() {
    const char* raw = std::getenv("GRANULYZER_SEED");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0') {
        throw config_error(std::string("GRANULYZER_SEED is not an integer: '") + raw + "'");
    }
    return static_cast<std::uint64_t>(v);
}

void apply_set_params(ExperimentConfig& cfg, const std::vector<std::string>& sets) {
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw config_error("--set expects key=value, got '" + kv + "'");
        }
        const std::string key = kv.substr(0, eq);
        char* end = nullptr;
        const std::string raw = kv.substr(eq + 1);
        const double value = std::strtod(raw.c_str(), &end);
        if (end != raw.c_str() + raw.size() || raw.empty()) {
            throw config_error("--set " + key + ": malformed number '" + raw + "'");
        }
        cfg.param_overrides[key] = value;
    }
}

// Precedence: explicit flags, then GRANULYZER_SEED, then the config file,
// then built-in defaults.
ExperimentConfig assemble_config(const SweepOptions& opt) {
    ExperimentConfig cfg;
    if (!opt.config_path.empty()) {
        cfg = load_config_file(opt.config_path);
    }
    if (const auto env = env_seed()) {
        cfg.seed = *env;
        cfg.seed_set = true;
    }
    if (opt.seed_given) {
        cfg.seed = opt.seed;
        cfg.seed_set = true;
    }
    if (!opt.workload.empty()) cfg.workload = opt.workload;
    if (!opt.ranks_text.empty()) cfg.ranks = parse_ranks(opt.ranks_text);
    if (opt.phases > 0) cfg.phases = opt.phases;
    if (!opt.mode_text.empty()) cfg.mode = mode_from_string(opt.mode_text);
    if (!opt.boundary_text.empty()) {
        if (opt.boundary_text == "clamp") {
            cfg.boundary = BoundaryMode::Clamp;
        } else if (opt.boundary_text == "wrap") {
            cfg.boundary = BoundaryMode::Wrap;
        } else {
            throw config_error("--boundary must be 'clamp' or 'wrap'");
        }
    }
    apply_set_params(cfg, opt.set_params);
    if (!opt.out_csv.empty()) cfg.output.samples_csv = opt.out_csv;
    if (!opt.trace_csv.empty()) cfg.output.trace_csv = opt.trace_csv;
    if (!opt.svg_path.empty()) cfg.output.svg = opt.svg_path;
    if (cfg.workload.empty()) {
        throw config_error("a workload is required (--workload or config file)");
    }
    return cfg;
}

void print_sample_table(const std::vector<ScalingSample>& samples, RegimeThresholds thresholds) {
    std::printf("%8s %16s %16s %14s %10s  %s\n", "P", "t_kernel_ms", "t_overhead_ms", "G",
                "omega_pct", "regime");
    for (const auto& s : samples) {
        const Granularity g = granularity({s.t_kernel_ms, s.t_overhead_ms});
        const double omega = overhead_fraction_percent(g);
        const Regime regime = classify_regime(g, thresholds);
        std::printf("%8d %16.6f %16.6f %14.4f %10.4f  %s\n", s.ranks, s.t_kernel_ms,
                    s.t_overhead_ms, g.value, omega, to_string(regime));
    }
}

void write_json_output(const json& doc, const std::string& path) {
    std::cout << doc.dump(2) << "\n";
    if (!path.empty()) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw io_error("cannot open '" + path + "' for writing");
        out << doc.dump(2) << "\n";
        if (!out) throw io_error("write failed for '" + path + "'");
    }
}

int do_sweep(const SweepOptions& opt) {
    const ExperimentConfig cfg = assemble_config(opt);
    const WorkloadSpec spec = cfg.resolve_workload();
    TaskGraphOptions graph{cfg.boundary, cfg.edge_budget};

    std::vector<ScalingSample> samples;
    std::vector<TraceRow> all_trace_rows;
    for (int p : cfg.ranks) {
        SimConfig sim;
        sim.workload = spec;
        sim.ranks = p;
        sim.phases = cfg.phases;
        sim.seed = cfg.seed;
        sim.mode = cfg.mode;
        sim.graph = graph;
        const ExecutionTrace trace = simulate(sim);
        samples.push_back(aggregate_trace(trace));
        if (!cfg.output.trace_csv.empty()) {
            const auto rows = trace_rows(trace, spec);
            all_trace_rows.insert(all_trace_rows.end(), rows.begin(), rows.end());
        }
    }

    std::printf("workload=%s topology=%s mode=%s seed=%" PRIu64 " phases=%d\n", spec.name.c_str(),
                to_string(spec.topology), to_string(cfg.mode), cfg.seed, cfg.phases);
    print_sample_table(samples, cfg.thresholds);

    if (!cfg.output.samples_csv.empty()) {
        std::vector<SampleRow> rows;
        rows.reserve(samples.size());
        for (const auto& s : samples) rows.push_back({spec.name, spec.topology, s});
        write_samples_file(cfg.output.samples_csv, rows);
    }
    if (!cfg.output.trace_csv.empty()) {
        write_trace_file(cfg.output.trace_csv, all_trace_rows);
    }
    if (!cfg.output.svg.empty()) {
        SvgSeries kernel{"t_kernel_ms", {}}, overhead{"t_overhead_ms", {}};
        for (const auto& s : samples) {
            kernel.points.emplace_back(s.ranks, s.t_kernel_ms);
            if (s.t_overhead_ms > 0) overhead.points.emplace_back(s.ranks, s.t_overhead_ms);
        }
        write_scatter_svg(cfg.output.svg, spec.name + " sweep", "P", "ms", {kernel, overhead},
                          true, true);
    }
    return exit_ok;
}

struct FitOptions {
    std::string samples_path;
    std::string topology_text;
    std::string out_json;
};

int do_fit(const FitOptions& opt) {
    const std::vector<SampleRow> rows = read_samples_file(opt.samples_path);
    if (rows.empty()) {
        throw config_error(opt.samples_path + ": insufficient samples (no data rows)");
    }
    TopologyClass topology;
    std::string workload = rows.front().workload;
    if (!opt.topology_text.empty()) {
        topology = topology_from_string(opt.topology_text);
    } else {
        topology = rows.front().topology;
        for (const auto& r : rows) {
            if (r.topology != topology) {
                throw config_error(opt.samples_path +
                                   ": mixed topologies in samples; pass --topology");
            }
        }
    }
    std::vector<ScalingSample> samples;
    samples.reserve(rows.size());
    for (const auto& r : rows) samples.push_back(r.sample);

    CalibrationResult calib;
    try {
        calib = calibrate(topology, samples);
    } catch (const std::invalid_argument& e) {
        throw config_error(opt.samples_path + ": " + e.what());
    }
    write_json_output(
        models_to_json(workload, topology, calib.kernel, calib.overhead, calib.diagnostics),
        opt.out_json);
    return exit_ok;
}

struct PredictOptions {
    std::string models_path;
    int range_hi = 256;
    std::string ranks_text;
    std::string out_json;
};

int do_predict(const PredictOptions& opt) {
    const ModelsDocument models = load_models_file(opt.models_path);
    const CrossoverPrediction pred =
        predict_crossover(models.overhead, models.kernel, opt.range_hi);
    const std::vector<int> ranks =
        parse_ranks(opt.ranks_text.empty() ? std::string("4:256:x2") : opt.ranks_text);
    const std::vector<CurvePoint> curve = granularity_curve(models.overhead, models.kernel, ranks);

    json curve_doc = json::array();
    for (const auto& cp : curve) curve_doc.push_back(curve_point_to_json(cp));
    json doc = {
        {"workload", models.workload},
        {"topology", to_string(models.topology)},
        {"crossover", crossover_to_json(pred)},
        {"curve", curve_doc},
    };
    write_json_output(doc, opt.out_json);
    return exit_ok;
}

struct DecideOptions {
    std::string models_path;
    std::string workload;
    double penalty = 1.0;
    std::string ranks_text;
    std::vector<std::string> set_params;
    std::string out_json;
};

int do_decide(const DecideOptions& opt) {
    const ModelsDocument models = load_models_file(opt.models_path);
    std::string workload_name = opt.workload.empty() ? models.workload : opt.workload;
    if (workload_name.empty()) {
        throw config_error("decide: a workload is required (--workload or models JSON)");
    }
    WorkloadSpec spec = preset(workload_name);
    for (const auto& kv : opt.set_params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw config_error("--set expects key=value, got '" + kv + "'");
        }
        const std::string raw = kv.substr(eq + 1);
        char* end = nullptr;
        const double value = std::strtod(raw.c_str(), &end);
        if (raw.empty() || end != raw.c_str() + raw.size()) {
            throw config_error("--set " + kv.substr(0, eq) + ": malformed number '" + raw + "'");
        }
        set_param(spec, kv.substr(0, eq), value);
    }
    if (!(opt.penalty >= 1.0)) {
        throw config_error("decide: penalty must be >= 1");
    }
    const std::vector<int> ranks =
        parse_ranks(opt.ranks_text.empty() ? std::string("4:256:x2") : opt.ranks_text);

    std::vector<Verdict> verdicts;
    verdicts.reserve(ranks.size());
    std::printf("%8s %16s %16s %14s  %s\n", "P", "t_static_hat_ms", "t_dyn_hat_ms", "margin_ms",
                "choice");
    for (int p : ranks) {
        const Verdict v = decide(static_time(spec, p, opt.penalty), models.kernel, models.overhead, p);
        verdicts.push_back(v);
        std::printf("%8d %16.6f %16.6f %14.6f  %s\n", v.ranks, v.t_static_hat_ms, v.t_dyn_hat_ms,
                    v.margin_ms, to_string(v.choice));
    }
    const auto flip = decision_flip_point(verdicts);
    if (flip) {
        std::printf("flip_point P=%d\n", *flip);
    } else {
        std::printf("flip_point none\n");
    }

    if (!opt.out_json.empty()) {
        json verdicts_doc = json::array();
        for (const auto& v : verdicts) verdicts_doc.push_back(verdict_to_json(v));
        json doc = {
            {"workload", spec.name},
            {"penalty", opt.penalty},
            {"verdicts", verdicts_doc},
        };
        doc["flip_point"] = flip ? json(*flip) : json(nullptr);
        std::ofstream out(opt.out_json, std::ios::binary);
        if (!out) throw io_error("cannot open '" + opt.out_json + "' for writing");
        out << doc.dump(2) << "\n";
        if (!out) throw io_error("write failed for '" + opt.out_json + "'");
    }
    return exit_ok;
}

struct CurveOptions {
    std::string samples_path;
    std::string out_csv;
    std::string svg_path;
    int reference_points = 200;
};

int do_curve(const CurveOptions& opt) {
    SvgSeries measured_series{"measured", {}}, reference_series{"omega=100/(G+1)", {}};
    std::ostringstream os;
    os << "series,workload,P,g,omega_pct\n";
    if (!opt.samples_path.empty()) {
        for (const auto& r : read_samples_file(opt.samples_path)) {
            const Granularity g = granularity({r.sample.t_kernel_ms, r.sample.t_overhead_ms});
            const double omega = overhead_fraction_percent(g);
            os << "measured," << r.workload << ',' << r.sample.ranks << ',' << format_ms(g.value)
               << ',' << format_ms(omega) << "\n";
            if (!g.is_unbounded()) measured_series.points.emplace_back(g.value, omega);
        }
    }
    // Reference curve omega% = 100/(G+1), log-uniform over [1e-2, 1e3].
    const int n = std::max(2, opt.reference_points);
    for (int i = 0; i < n; ++i) {
        const double e = -2.0 + 5.0 * static_cast<double>(i) / static_cast<double>(n - 1);
        const double g = std::pow(10.0, e);
        os << "reference,,," << format_ms(g) << ',' << format_ms(100.0 / (g + 1.0)) << "\n";
        reference_series.points.emplace_back(g, 100.0 / (g + 1.0));
    }
    for (double g : {1.0, 10.0}) {
        os << "boundary,,," << format_ms(g) << ',' << format_ms(0.0) << "\n";
        os << "boundary,,," << format_ms(g) << ',' << format_ms(100.0) << "\n";
    }
    if (opt.out_csv.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream out(opt.out_csv, std::ios::binary);
        if (!out) throw io_error("cannot open '" + opt.out_csv + "' for writing");
        out << os.str();
        if (!out) throw io_error("write failed for '" + opt.out_csv + "'");
    }
    if (!opt.svg_path.empty()) {
        write_scatter_svg(opt.svg_path, "overhead fraction vs granularity number", "G",
                          "omega_pct", {measured_series, reference_series}, true, false);
    }
    return exit_ok;
}

struct ReportOptions {
    SweepOptions sweep;
    double penalty = 0.0; // 0 means estimate from simulation
    std::string out_json;
};

int do_report(const ReportOptions& opt) {
    ExperimentConfig cfg = assemble_config(opt.sweep);
    if (opt.penalty > 0.0) cfg.penalty = opt.penalty;
    if (!opt.out_json.empty()) cfg.output.report_json = opt.out_json;

    const Report report = build_report(cfg);
    const json doc = report_to_json(report);

    std::printf("workload=%s topology=%s seed=%" PRIu64 " phases=%d penalty=%.6f%s\n",
                report.workload.c_str(), to_string(report.topology), report.seed, report.phases,
                report.penalty, report.penalty_estimated ? " (estimated)" : "");
    std::printf("%8s %16s %16s %14s %10s  %s\n", "P", "t_kernel_ms", "t_overhead_ms", "G",
                "omega_pct", "regime");
    for (const auto& r : report.rows) {
        std::printf("%8d %16.6f %16.6f %14.4f %10.4f  %s\n", r.ranks, r.t_kernel_ms,
                    r.t_overhead_ms, r.g.value, r.omega_pct, to_string(r.regime));
    }
    std::printf("kernel a=%.9g; overhead %s alpha=%.9g beta=%.9g\n", report.kernel.a,
                to_string(report.overhead.form), report.overhead.alpha, report.overhead.beta);
    if (std::isfinite(report.crossover.p_star)) {
        std::printf("crossover p_star=%.4f exists_in_range=%s\n", report.crossover.p_star,
                    report.crossover.exists_in_range ? "true" : "false");
    } else {
        std::printf("crossover none\n");
    }
    if (report.flip_point) {
        std::printf("decision flip_point P=%d\n", *report.flip_point);
    } else {
        std::printf("decision flip_point none\n");
    }
    std::printf("bracket [%s, %s] prediction_check=%s\n",
                report.bracket.last_non_detrimental
                    ? std::to_string(*report.bracket.last_non_detrimental).c_str()
                    : "-",
                report.bracket.first_detrimental
                    ? std::to_string(*report.bracket.first_detrimental).c_str()
                    : "-",
                report.bracket.prediction_check.c_str());

    if (!cfg.output.report_json.empty()) {
        std::ofstream out(cfg.output.report_json, std::ios::binary);
        if (!out) throw io_error("cannot open '" + cfg.output.report_json + "' for writing");
        out << doc.dump(2) << "\n";
        if (!out) throw io_error("write failed for '" + cfg.output.report_json + "'");
    }
    if (!cfg.output.samples_csv.empty()) {
        std::ofstream out(cfg.output.samples_csv, std::ios::binary);
        if (!out) throw io_error("cannot open '" + cfg.output.samples_csv + "' for writing");
        out << report.samples_csv;
        if (!out) throw io_error("write failed for '" + cfg.output.samples_csv + "'");
    }
    return exit_ok;
}

void add_sweep_flags(CLI::App* cmd, SweepOptions& opt) {
    cmd->add_option("--workload", opt.workload, "Workload preset name");
    cmd->add_option("--ranks", opt.ranks_text, "Rank sweep, e.g. 4:256:x2 or 4,8,12");
    cmd->add_option("--phases", opt.phases, "Phases (timesteps) per simulation");
    auto* seed_opt = cmd->add_option("--seed", opt.seed, "Simulation seed");
    cmd->callback([seed_opt, &opt]() { opt.seed_given = seed_opt->count() > 0; });
    cmd->add_option("--set", opt.set_params, "Workload parameter override key=value")
        ->take_all();
    cmd->add_option("--config", opt.config_path, "Experiment config JSON");
    cmd->add_option("--boundary", opt.boundary_text, "Neighborhood boundary: clamp or wrap");
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"granulyzer: granularity characterization of task scheduling"};
    app.require_subcommand(1);

    SweepOptions sweep_opt;
    auto* sweep_cmd = app.add_subcommand("sweep", "Simulate a strong-scaling sweep");
    add_sweep_flags(sweep_cmd, sweep_opt);
    sweep_cmd->add_option("--mode", sweep_opt.mode_text, "dynamic or static");
    sweep_cmd->add_option("--out", sweep_opt.out_csv, "Aggregated samples CSV path");
    sweep_cmd->add_option("--trace", sweep_opt.trace_csv, "Per-phase trace CSV path");
    sweep_cmd->add_option("--svg", sweep_opt.svg_path, "Scatter SVG path");

    FitOptions fit_opt;
    auto* fit_cmd = app.add_subcommand("fit", "Fit kernel and overhead models to samples");
    fit_cmd->add_option("--samples", fit_opt.samples_path, "Samples CSV")->required();
    fit_cmd->add_option("--topology", fit_opt.topology_text,
                        "Override topology (default: from CSV)");
    fit_cmd->add_option("--out", fit_opt.out_json, "Models JSON path");

    PredictOptions predict_opt;
    auto* predict_cmd = app.add_subcommand("predict", "Predict the crossover P*");
    predict_cmd->add_option("--models", predict_opt.models_path, "Models JSON")->required();
    predict_cmd->add_option("--range-hi", predict_opt.range_hi, "Upper end of the rank range");
    predict_cmd->add_option("--ranks", predict_opt.ranks_text, "Rank points for the G(P) curve");
    predict_cmd->add_option("--out", predict_opt.out_json, "Prediction JSON path");

    DecideOptions decide_opt;
    auto* decide_cmd = app.add_subcommand("decide", "Dynamic-vs-static verdict per rank count");
    decide_cmd->add_option("--models", decide_opt.models_path, "Models JSON")->required();
    decide_cmd->add_option("--workload", decide_opt.workload, "Workload for the static baseline");
    decide_cmd->add_option("--penalty", decide_opt.penalty, "Static imbalance penalty >= 1");
    decide_cmd->add_option("--ranks", decide_opt.ranks_text, "Rank points");
    decide_cmd->add_option("--set", decide_opt.set_params, "Workload parameter override")
        ->take_all();
    decide_cmd->add_option("--out", decide_opt.out_json, "Verdicts JSON path");

    CurveOptions curve_opt;
    auto* curve_cmd = app.add_subcommand("curve", "Emit (G, omega%) points and reference curve");
    curve_cmd->add_option("--samples", curve_opt.samples_path, "Samples CSV (optional)");
    curve_cmd->add_option("--out", curve_opt.out_csv, "Curve CSV path (default stdout)");
    curve_cmd->add_option("--svg", curve_opt.svg_path, "Scatter SVG path");
    curve_cmd->add_option("--ref-points", curve_opt.reference_points,
                          "Reference curve sample count");

    ReportOptions report_opt;
    auto* report_cmd =
        app.add_subcommand("report", "Full pipeline: sweep, fit, predict, decide");
    add_sweep_flags(report_cmd, report_opt.sweep);
    report_cmd->add_option("--penalty", report_opt.penalty,
                           "Static imbalance penalty (default: estimated)");
    report_cmd->add_option("--out", report_opt.out_json, "Report JSON path");
    report_cmd->add_option("--samples-out", report_opt.sweep.out_csv, "Samples CSV path");

    std::vector<const char*> argv;
    argv.push_back("granulyzer");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (sweep_cmd->parsed()) return do_sweep(sweep_opt);
        if (fit_cmd->parsed()) return do_fit(fit_opt);
        if (predict_cmd->parsed()) return do_predict(predict_opt);
        if (decide_cmd->parsed()) return do_decide(decide_opt);
        if (curve_cmd->parsed()) return do_curve(curve_opt);
        if (report_cmd->parsed()) return do_report(report_opt);
        throw internal_error("no subcommand dispatched");
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const resource_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_internal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
}

} // namespace granulyzer

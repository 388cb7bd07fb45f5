#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "granulyzer/calibration.hpp"
#include "granulyzer/decision.hpp"
#include "granulyzer/model.hpp"
#include "granulyzer/simulator.hpp"
#include "granulyzer/topology.hpp"
#include "granulyzer/workloads.hpp"

namespace py = pybind11;
using namespace granulyzer;

namespace {

// Python surface uses plain floats for G; +inf stands for unbounded.
Granularity granularity_from_double(double g) {
    if (g == std::numeric_limits<double>::infinity()) return Granularity::unbounded();
    return {g};
}

} // namespace

PYBIND11_MODULE(_granulyzer, m) {
    m.doc() = "Granularity characterization of task scheduling: topology-driven overhead "
              "models, deterministic simulation, calibration and crossover prediction.";

    py::enum_<TopologyClass>(m, "TopologyClass")
        .value("Global", TopologyClass::Global)
        .value("LocalStencil", TopologyClass::LocalStencil)
        .value("LocalSweep", TopologyClass::LocalSweep)
        .value("Independent", TopologyClass::Independent);

    py::enum_<BoundaryMode>(m, "BoundaryMode")
        .value("Clamp", BoundaryMode::Clamp)
        .value("Wrap", BoundaryMode::Wrap);

    py::enum_<Regime>(m, "Regime")
        .value("Beneficial", Regime::Beneficial)
        .value("Marginal", Regime::Marginal)
        .value("Detrimental", Regime::Detrimental);

    py::enum_<SchedulingMode>(m, "Mode")
        .value("Dynamic", SchedulingMode::Dynamic)
        .value("Static", SchedulingMode::Static);

    py::enum_<OverheadForm>(m, "OverheadForm")
        .value("Quadratic", OverheadForm::Quadratic)
        .value("Linear", OverheadForm::Linear)
        .value("Constant", OverheadForm::Constant);

    m.def("neighborhood", &neighborhood, py::arg("topology"), py::arg("ranks"), py::arg("i"),
          py::arg("boundary") = BoundaryMode::Clamp);
    m.def("edge_count", &edge_count, py::arg("topology"), py::arg("ranks"),
          py::arg("boundary") = BoundaryMode::Clamp);
    m.def("decay_exponent", &decay_exponent, py::arg("topology"));

    m.def("phase_time", [](double t_comp, double t_comm, double rho, int k, double tau_s) {
        return phase_time({t_comp, t_comm, rho, k, tau_s, 0.0});
    }, py::arg("t_comp_ms"), py::arg("t_comm_ms"), py::arg("rho"), py::arg("k"),
       py::arg("tau_s_ms"));
    m.def("exposed_overhead", &exposed_overhead, py::arg("rho"), py::arg("k"),
          py::arg("tau_s_ms"));
    m.def("granularity", [](double t_kernel, double t_overhead) {
        return granularity({t_kernel, t_overhead}).value;
    }, py::arg("t_kernel_ms"), py::arg("t_overhead_ms"));
    m.def("overhead_ratio", [](double g) { return overhead_ratio(granularity_from_double(g)); },
          py::arg("g"));
    m.def("overhead_fraction_percent",
          [](double g) { return overhead_fraction_percent(granularity_from_double(g)); },
          py::arg("g"));
    m.def("classify_regime",
          [](double g) { return classify_regime(granularity_from_double(g)); }, py::arg("g"));

    py::class_<WorkloadParams>(m, "WorkloadParams")
        .def_readwrite("n", &WorkloadParams::n)
        .def_readwrite("c", &WorkloadParams::c)
        .def_readwrite("degree", &WorkloadParams::degree)
        .def_readwrite("k", &WorkloadParams::k)
        .def_readwrite("rho", &WorkloadParams::rho)
        .def_readwrite("tau_s_ms", &WorkloadParams::tau_s_ms)
        .def_readwrite("tau_e_ms", &WorkloadParams::tau_e_ms)
        .def_readwrite("imbalance", &WorkloadParams::imbalance);

    py::class_<WorkloadSpec>(m, "WorkloadSpec")
        .def_readonly("name", &WorkloadSpec::name)
        .def_readonly("topology", &WorkloadSpec::topology)
        .def_readwrite("params", &WorkloadSpec::params)
        .def("work_at_one", &WorkloadSpec::work_at_one)
        .def("kernel_work", &WorkloadSpec::kernel_work, py::arg("ranks"))
        .def("set_param", [](WorkloadSpec& s, const std::string& key, double value) {
            set_param(s, key, value);
        }, py::arg("key"), py::arg("value"))
        .def("__repr__", [](const WorkloadSpec& s) {
            return "<WorkloadSpec " + s.name + ">";
        });

    m.def("preset", [](const std::string& name) { return preset(name); }, py::arg("name"));
    m.def("preset_names", []() { return preset_names(); });
    m.def("kernel_time", &kernel_time, py::arg("spec"), py::arg("ranks"));

    py::class_<PhaseTiming>(m, "PhaseTiming")
        .def(py::init<>())
        .def_readwrite("t_kernel_ms", &PhaseTiming::t_kernel_ms)
        .def_readwrite("t_overhead_ms", &PhaseTiming::t_overhead_ms);

    py::class_<ExecutionTrace>(m, "ExecutionTrace")
        .def_readonly("mode", &ExecutionTrace::mode)
        .def_readonly("ranks", &ExecutionTrace::ranks)
        .def_readonly("seed", &ExecutionTrace::seed)
        .def_readonly("per_phase", &ExecutionTrace::per_phase)
        .def_readonly("measured_edges", &ExecutionTrace::measured_edges)
        .def_readonly("makespan_ms", &ExecutionTrace::makespan_ms);

    m.def("simulate", [](const WorkloadSpec& spec, int ranks, int phases, std::uint64_t seed,
                         SchedulingMode mode) {
        SimConfig cfg;
        cfg.workload = spec;
        cfg.ranks = ranks;
        cfg.phases = phases;
        cfg.seed = seed;
        cfg.mode = mode;
        return simulate(cfg);
    }, py::arg("spec"), py::arg("ranks"), py::arg("phases") = 8, py::arg("seed") = 42,
       py::arg("mode") = SchedulingMode::Dynamic);

    py::class_<ScalingSample>(m, "ScalingSample")
        .def(py::init([](int ranks, double t_kernel_ms, double t_overhead_ms) {
            return ScalingSample{ranks, t_kernel_ms, t_overhead_ms};
        }), py::arg("ranks"), py::arg("t_kernel_ms"), py::arg("t_overhead_ms"))
        .def_readwrite("ranks", &ScalingSample::ranks)
        .def_readwrite("t_kernel_ms", &ScalingSample::t_kernel_ms)
        .def_readwrite("t_overhead_ms", &ScalingSample::t_overhead_ms)
        .def("__repr__", [](const ScalingSample& s) {
            return "<ScalingSample P=" + std::to_string(s.ranks) + ">";
        });

    m.def("aggregate_trace", &aggregate_trace, py::arg("trace"));
    m.def("run_sweep", [](const WorkloadSpec& spec, const std::vector<int>& ranks, int phases,
                          std::uint64_t seed, SchedulingMode mode) {
        return run_sweep(spec, ranks, phases, seed, mode);
    }, py::arg("spec"), py::arg("ranks"), py::arg("phases") = 8, py::arg("seed") = 42,
       py::arg("mode") = SchedulingMode::Dynamic);

    py::class_<KernelModel>(m, "KernelModel")
        .def(py::init([](double a) { return KernelModel{a}; }), py::arg("a"))
        .def_readwrite("a", &KernelModel::a);

    py::class_<OverheadModel>(m, "OverheadModel")
        .def(py::init([](OverheadForm form, double alpha, double beta) {
            OverheadModel mdl;
            mdl.form = form;
            mdl.alpha = alpha;
            mdl.beta = beta;
            return mdl;
        }), py::arg("form"), py::arg("alpha") = 0.0, py::arg("beta") = 0.0)
        .def_readwrite("form", &OverheadModel::form)
        .def_readwrite("alpha", &OverheadModel::alpha)
        .def_readwrite("beta", &OverheadModel::beta)
        .def_readonly("alpha_clamped", &OverheadModel::alpha_clamped)
        .def_readonly("beta_clamped", &OverheadModel::beta_clamped)
        .def("evaluate", &OverheadModel::evaluate, py::arg("ranks"));

    py::class_<CrossoverPrediction>(m, "CrossoverPrediction")
        .def_readonly("p_star", &CrossoverPrediction::p_star)
        .def_readonly("exists_in_range", &CrossoverPrediction::exists_in_range)
        .def_readonly("range_hi", &CrossoverPrediction::range_hi);

    py::class_<FitDiagnostics>(m, "FitDiagnostics")
        .def_readonly("kernel_rms_residual", &FitDiagnostics::kernel_rms_residual)
        .def_readonly("overhead_rms_residual", &FitDiagnostics::overhead_rms_residual)
        .def_readonly("points_used", &FitDiagnostics::points_used)
        .def_readonly("filtered", &FitDiagnostics::filtered);

    py::class_<CalibrationResult>(m, "CalibrationResult")
        .def_readonly("kernel", &CalibrationResult::kernel)
        .def_readonly("overhead", &CalibrationResult::overhead)
        .def_readonly("diagnostics", &CalibrationResult::diagnostics);

    m.def("overhead_form_for", &overhead_form_for, py::arg("topology"));
    m.def("fit_kernel", &fit_kernel, py::arg("samples"));
    m.def("fit_overhead", &fit_overhead, py::arg("topology"), py::arg("samples"));
    m.def("pre_collapse_filter", &pre_collapse_filter, py::arg("topology"), py::arg("samples"),
          py::arg("kernel"));
    m.def("predict_crossover", &predict_crossover, py::arg("overhead"), py::arg("kernel"),
          py::arg("range_hi"));
    m.def("granularity_curve", [](const OverheadModel& mdl, const KernelModel& kernel,
                                  const std::vector<int>& ranks) {
        py::list out;
        for (const auto& cp : granularity_curve(mdl, kernel, ranks)) {
            py::dict row;
            row["P"] = cp.ranks;
            row["g"] = cp.g.value;
            row["omega_pct"] = cp.omega_pct;
            row["regime"] = cp.regime;
            out.append(row);
        }
        return out;
    }, py::arg("overhead"), py::arg("kernel"), py::arg("ranks"));
    m.def("calibrate", &calibrate, py::arg("topology"), py::arg("samples"));

    py::class_<Verdict>(m, "Verdict")
        .def_readonly("choice", &Verdict::choice)
        .def_readonly("t_static_hat_ms", &Verdict::t_static_hat_ms)
        .def_readonly("t_dyn_hat_ms", &Verdict::t_dyn_hat_ms)
        .def_readonly("ranks", &Verdict::ranks)
        .def_readonly("margin_ms", &Verdict::margin_ms);

    m.def("static_time_fft", &static_time_fft, py::arg("n"), py::arg("ranks"), py::arg("c"));
    m.def("static_time", &static_time, py::arg("spec"), py::arg("ranks"),
          py::arg("imbalance_penalty") = 1.0);
    m.def("dynamic_time_hat", &dynamic_time_hat, py::arg("kernel"), py::arg("overhead"),
          py::arg("ranks"));
    m.def("decide", &decide, py::arg("static_hat_ms"), py::arg("kernel"), py::arg("overhead"),
          py::arg("ranks"));
}

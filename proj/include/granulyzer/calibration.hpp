#pragma once

#include <vector>

#include "granulyzer/model.hpp"
#include "granulyzer/topology.hpp"

namespace granulyzer {

// One strong-scaling measurement, from the simulator or imported from CSV.
struct ScalingSample {
    int ranks = 0;
    double t_kernel_ms = 0.0;   // > 0
    double t_overhead_ms = 0.0; // >= 0
};

// Ideal strong-scaling kernel model T_kernel(P) = a / P.
struct KernelModel {
    double a = 0.0; // ms * ranks
};

enum class OverheadForm { Quadratic, Linear, Constant };

const char* to_string(OverheadForm f);
OverheadForm overhead_form_from_string(std::string_view s);

// The overhead functional form is dictated by the dependency topology, not
// chosen by the fit.
OverheadForm overhead_form_for(TopologyClass c);

// T_overhead(P) = alpha*P^2 + beta (quadratic), alpha*P + beta (linear) or
// beta (constant). Negative fitted parameters are clamped to zero and flagged.
struct OverheadModel {
    OverheadForm form = OverheadForm::Constant;
    double alpha = 0.0;
    double beta = 0.0;
    bool alpha_clamped = false;
    bool beta_clamped = false;

    double evaluate(double ranks) const;
};

struct CrossoverPrediction {
    double p_star = 0.0; // +inf when no crossover exists
    bool exists_in_range = false;
    int range_hi = 0;
};

struct CurvePoint {
    int ranks = 0;
    Granularity g;
    double omega_pct = 0.0;
    Regime regime = Regime::Beneficial;
};

struct FitDiagnostics {
    double kernel_rms_residual = 0.0;
    double overhead_rms_residual = 0.0;
    int points_used = 0; // overhead samples after pre-collapse filtering
    bool filtered = false;
};

struct CalibrationResult {
    KernelModel kernel;
    OverheadModel overhead;
    FitDiagnostics diagnostics;
};

// Least squares A for T_kernel = A/P; closed form
// A = sum(t_kernel/P) / sum(1/P^2). Requires >= 1 sample.
KernelModel fit_kernel(const std::vector<ScalingSample>& samples);

// Least squares (alpha, beta) for the topology-dictated form. Quadratic and
// linear forms need >= 2 samples at distinct P; constant needs >= 1 and uses
// the median for robustness to noise.
OverheadModel fit_overhead(TopologyClass c, const std::vector<ScalingSample>& samples);

// Restricts samples to the pre-collapse region P <= P*. Fixed-point
// iteration: fit, solve for P*, retain, refit; at most 5 rounds. Never
// returns fewer than the two smallest-P samples; degenerates to the full set
// when no crossover exists.
std::vector<ScalingSample> pre_collapse_filter(TopologyClass c,
                                               const std::vector<ScalingSample>& samples,
                                               const KernelModel& kernel);

// Unique positive root of T_overhead(P) = a/P. Quadratic form solved by
// bisection, linear by the stable quadratic formula, constant in closed form.
CrossoverPrediction predict_crossover(const OverheadModel& model, const KernelModel& kernel,
                                      int range_hi);

// G(P) = (a/P) / T_overhead(P) with omega% and regime at each rank count.
std::vector<CurvePoint> granularity_curve(const OverheadModel& model, const KernelModel& kernel,
                                          const std::vector<int>& ranks);

// Full pipeline: kernel fit on all samples, pre-collapse filter for the
// quadratic form, overhead fit on the retained subset.
CalibrationResult calibrate(TopologyClass c, const std::vector<ScalingSample>& samples);

} // namespace granulyzer

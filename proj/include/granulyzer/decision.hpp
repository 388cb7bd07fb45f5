#pragma once

#include <optional>
#include <vector>

#include "granulyzer/calibration.hpp"
#include "granulyzer/simulator.hpp"
#include "granulyzer/workloads.hpp"

namespace granulyzer {

// Outcome of the dynamic-vs-static rule at one rank count. Dynamic is chosen
// iff the margin (static minus dynamic prediction) is strictly positive; ties
// fall to static.
struct Verdict {
    SchedulingMode choice = SchedulingMode::Static;
    double t_static_hat_ms = 0.0;
    double t_dyn_hat_ms = 0.0;
    int ranks = 0;
    double margin_ms = 0.0; // t_static_hat - t_dyn_hat
};

// Static execution time of one FFT stage under ideal load balance:
// (N^2/P) * c * N * log2(N).
double static_time_fft(double n, int ranks, double c);

// Generic static baseline: ideal kernel time scaled by an imbalance penalty
// >= 1. With penalty 1 and the fft preset this reduces to static_time_fft.
double static_time(const WorkloadSpec& spec, int ranks, double imbalance_penalty);

// Predicted dynamic execution time A/P + T_overhead(P).
double dynamic_time_hat(const KernelModel& kernel, const OverheadModel& overhead, int ranks);

Verdict decide(double static_hat_ms, const KernelModel& kernel, const OverheadModel& overhead,
               int ranks);

// First rank count at which the verdict switches from Dynamic to Static along
// an ascending sweep; nullopt when no flip occurs in range.
std::optional<int> decision_flip_point(const std::vector<Verdict>& verdicts);

} // namespace granulyzer

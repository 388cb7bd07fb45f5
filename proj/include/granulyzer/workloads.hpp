#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "granulyzer/topology.hpp"

namespace granulyzer {

enum class WorkloadKind { Fft, Stencil, Sweep, Gemm, Spmv, Conv2d, Pagerank, Nbody };

// Named constants of a workload. All fields are overridable through the
// harness config file or --set key=value.
struct WorkloadParams {
    double n = 0.0;         // problem dimension: grid side, transform size, particles, vertices
    double c = 5e-6;        // per-unit-work kernel cost, ms
    double degree = 0.0;    // pagerank only: average vertex degree (edges = n * degree)
    int k = 4;              // tasks per rank-slot
    double rho = 0.5;       // hidden fraction of scheduler time
    double tau_s_ms = 0.05; // per-task dispatch cost
    double tau_e_ms = 0.002; // per-dependency-edge resolution cost
    double imbalance = 0.2; // coefficient of variation of subtask durations
};

// A preset workload: topology class plus the law giving kernel work at P
// ranks. kernel_work(P) is exactly work_at_one()/P, so ideal strong scaling
// holds by construction. Immutable in practice; safe for concurrent reads.
struct WorkloadSpec {
    std::string name;
    WorkloadKind kind = WorkloadKind::Gemm;
    TopologyClass topology = TopologyClass::Independent;
    WorkloadParams params;

    // A: kernel time at P = 1, in ms.
    double work_at_one() const;
    double kernel_work(int ranks) const;
};

// Valid names: fft, stencil, sweep, gemm, spmv, conv2d, pagerank, nbody.
// Unknown names throw std::invalid_argument listing the valid set.
WorkloadSpec preset(std::string_view name);
const std::vector<std::string>& preset_names();

double kernel_time(const WorkloadSpec& spec, int ranks);

// Applies a named override (n, c, degree, k, rho, tau_s, tau_e, imbalance).
// Unknown keys throw std::invalid_argument.
void set_param(WorkloadSpec& spec, std::string_view key, double value);
double get_param(const WorkloadSpec& spec, std::string_view key);

} // namespace granulyzer

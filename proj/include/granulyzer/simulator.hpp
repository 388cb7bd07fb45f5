#pragma once

#include <cstdint>
#include <vector>

#include "granulyzer/calibration.hpp"
#include "granulyzer/model.hpp"
#include "granulyzer/topology.hpp"
#include "granulyzer/workloads.hpp"

namespace granulyzer {

enum class SchedulingMode { Dynamic, Static };

const char* to_string(SchedulingMode m);
SchedulingMode mode_from_string(std::string_view s);

struct SimConfig {
    WorkloadSpec workload;
    int ranks = 4;
    int phases = 8;
    std::uint64_t seed = 42;
    SchedulingMode mode = SchedulingMode::Dynamic;
    TaskGraphOptions graph;
};

// Measured outcome of one simulated execution. Identical SimConfig produces a
// bit-identical trace, including across process runs. Immutable once built.
struct ExecutionTrace {
    SchedulingMode mode = SchedulingMode::Dynamic;
    int ranks = 0;
    std::uint64_t seed = 0;
    std::vector<PhaseTiming> per_phase;
    std::vector<std::uint64_t> measured_edges; // edges resolved entering each phase
    double makespan_ms = 0.0;
};

// Deterministic discrete-event simulation of one multi-phase execution.
//
// Per phase, k*P subtasks are created; durations are log-normal with mean
// kernel_time(spec, P)/k and CV = imbalance, addressed by (seed, phase, task).
//
// Dynamic mode: subtasks are pulled from a global FIFO ready queue by the
// first idle rank (ties to the lowest rank index). A slot at timestep t
// becomes ready when every slot in its dependency neighborhood at t-1 has
// completed; ranks proceed asynchronously, with no phase barrier. Exposed
// scheduler time per phase is (1-rho) * (k*tau_s + tau_e*|E_phase|): per-worker
// dispatch runs concurrently across workers while edge resolution is
// serialized on the scheduler timeline. It is recorded as t_overhead and added
// to the makespan; stalls on dependencies extend t_kernel instead.
//
// Static mode: subtasks are bound to their home rank in contiguous blocks of
// k; t_kernel is the max over ranks of summed durations and t_overhead is 0.
ExecutionTrace simulate(const SimConfig& config);

// Per-phase medians of t_kernel and t_overhead.
ScalingSample aggregate_trace(const ExecutionTrace& trace);

// One ScalingSample per rank count; ranks must be non-empty and strictly
// ascending. Deterministic given the seed.
std::vector<ScalingSample> run_sweep(const WorkloadSpec& workload, const std::vector<int>& ranks,
                                     int phases, std::uint64_t seed, SchedulingMode mode,
                                     TaskGraphOptions graph = {});

} // namespace granulyzer

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace granulyzer {

// Dependency structure between consecutive timesteps. Each class maps to
// exactly one overhead functional form: Global -> quadratic,
// LocalStencil/LocalSweep -> linear, Independent -> constant.
enum class TopologyClass {
    Global,       // all-to-all: task (t,i) depends on every rank at t-1
    LocalStencil, // nearest neighbors {i-1, i, i+1}
    LocalSweep,   // unidirectional {i-1, i}
    Independent,  // no runtime dependencies
};

// Out-of-range neighbors are dropped by default (1D row decomposition with
// physical boundaries). Periodic wrap is opt-in.
enum class BoundaryMode { Clamp, Wrap };

const char* to_string(TopologyClass c);
TopologyClass topology_from_string(std::string_view s);

struct TaskId {
    std::int32_t timestep = 0;   // t >= 0
    std::int32_t rank_index = 0; // i in [0, P)
};

// Ranks at timestep t-1 that task (t,i) depends on. Sorted, duplicate-free,
// always a subset of [0, P). Throws std::domain_error for i outside [0, P).
std::vector<std::int32_t> neighborhood(TopologyClass c, std::int32_t ranks, std::int32_t i,
                                       BoundaryMode boundary = BoundaryMode::Clamp);

// Dependency edges per timestep transition, sum of |neighborhood| over all i.
// Closed forms (clamp): Global P^2, LocalStencil 3P-2, LocalSweep 2P-1,
// Independent 0.
std::uint64_t edge_count(TopologyClass c, std::int64_t ranks,
                         BoundaryMode boundary = BoundaryMode::Clamp);

struct TaskGraphOptions {
    BoundaryMode boundary = BoundaryMode::Clamp;
    std::uint64_t edge_budget = 16'000'000; // total edges across all transitions
};

// Timestep-by-rank task grid. Neighborhoods are identical at every timestep,
// so one neighbor list per rank index is stored and shared. Edges always point
// from timestep t to t-1, so the graph is acyclic by construction. Immutable
// after construction; safe for concurrent reads.
class TaskGraph {
public:
    static TaskGraph build(TopologyClass c, std::int32_t ranks, std::int32_t timesteps,
                           std::int32_t tasks_per_rank_slot, TaskGraphOptions options = {});

    TopologyClass topology() const { return topology_; }
    std::int32_t ranks() const { return ranks_; }
    std::int32_t timesteps() const { return timesteps_; }
    std::int32_t tasks_per_rank_slot() const { return tasks_per_rank_slot_; }

    // Dependency ranks of slot (t, i) for any t >= 1.
    const std::vector<std::int32_t>& neighbors(std::int32_t i) const { return neighbors_.at(i); }
    // Ranks at t+1 that depend on slot (t, i); the reverse adjacency.
    const std::vector<std::int32_t>& dependents(std::int32_t i) const { return dependents_.at(i); }

    std::uint64_t edges_per_transition() const { return edges_per_transition_; }
    std::uint64_t total_edges() const {
        return edges_per_transition_ * static_cast<std::uint64_t>(timesteps_ - 1);
    }
    std::int64_t task_count() const {
        return static_cast<std::int64_t>(ranks_) * timesteps_;
    }

private:
    TaskGraph() = default;

    TopologyClass topology_ = TopologyClass::Independent;
    std::int32_t ranks_ = 0;
    std::int32_t timesteps_ = 0;
    std::int32_t tasks_per_rank_slot_ = 0;
    std::uint64_t edges_per_transition_ = 0;
    std::vector<std::vector<std::int32_t>> neighbors_;
    std::vector<std::vector<std::int32_t>> dependents_;
};

} // namespace granulyzer

#include "granulyzer/topology.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "granulyzer/errors.hpp"

namespace granulyzer {

const char* to_string(TopologyClass c) {
    switch (c) {
    case TopologyClass::Global: return "global";
    case TopologyClass::LocalStencil: return "local_stencil";
    case TopologyClass::LocalSweep: return "local_sweep";
    case TopologyClass::Independent: return "independent";
    }
    throw internal_error("unknown TopologyClass");
}

TopologyClass topology_from_string(std::string_view s) {
    if (s == "global") return TopologyClass::Global;
    if (s == "local_stencil") return TopologyClass::LocalStencil;
    if (s == "local_sweep") return TopologyClass::LocalSweep;
    if (s == "independent") return TopologyClass::Independent;
    throw std::invalid_argument("unknown topology '" + std::string(s) +
                                "' (expected global, local_stencil, local_sweep, independent)");
}

namespace {

std::vector<std::int32_t> offsets_for(TopologyClass c, std::int32_t i) {
    switch (c) {
    case TopologyClass::Global: return {}; // handled by caller
    case TopologyClass::LocalStencil: return {i - 1, i, i + 1};
    case TopologyClass::LocalSweep: return {i - 1, i};
    case TopologyClass::Independent: return {};
    }
    throw internal_error("unknown TopologyClass");
}

std::int32_t wrap_index(std::int32_t j, std::int32_t p) {
    const std::int32_t m = j % p;
    return m < 0 ? m + p : m;
}

} // namespace

std::vector<std::int32_t> neighborhood(TopologyClass c, std::int32_t ranks, std::int32_t i,
                                       BoundaryMode boundary) {
    if (ranks < 1) {
        throw std::invalid_argument("neighborhood: ranks must be >= 1");
    }
    if (i < 0 || i >= ranks) {
        throw std::domain_error("neighborhood: rank index " + std::to_string(i) +
                                " outside [0, " + std::to_string(ranks) + ")");
    }
    if (c == TopologyClass::Global) {
        std::vector<std::int32_t> all(static_cast<std::size_t>(ranks));
        for (std::int32_t j = 0; j < ranks; ++j) all[static_cast<std::size_t>(j)] = j;
        return all;
    }
    std::vector<std::int32_t> out;
    for (std::int32_t j : offsets_for(c, i)) {
        if (boundary == BoundaryMode::Clamp) {
            if (j >= 0 && j < ranks) out.push_back(j);
        } else {
            out.push_back(wrap_index(j, ranks));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::uint64_t edge_count(TopologyClass c, std::int64_t ranks, BoundaryMode boundary) {
    if (ranks < 1) {
        throw std::invalid_argument("edge_count: ranks must be >= 1");
    }
    const auto p = static_cast<std::uint64_t>(ranks);
    switch (c) {
    case TopologyClass::Global:
        return p * p;
    case TopologyClass::LocalStencil:
        if (boundary == BoundaryMode::Clamp) return 3 * p - 2;
        // wrap: the three offsets collapse at tiny P
        if (p == 1) return 1;
        if (p == 2) return 4;
        return 3 * p;
    case TopologyClass::LocalSweep:
        if (boundary == BoundaryMode::Clamp) return 2 * p - 1;
        return p == 1 ? 1 : 2 * p;
    case TopologyClass::Independent:
        return 0;
    }
    throw internal_error("unknown TopologyClass");
}

TaskGraph TaskGraph::build(TopologyClass c, std::int32_t ranks, std::int32_t timesteps,
                           std::int32_t tasks_per_rank_slot, TaskGraphOptions options) {
    if (ranks < 1 || timesteps < 1 || tasks_per_rank_slot < 1) {
        throw std::invalid_argument("TaskGraph: ranks, timesteps and tasks_per_rank_slot must be >= 1");
    }
    const std::uint64_t per_step = edge_count(c, ranks, options.boundary);
    const std::uint64_t total = per_step * static_cast<std::uint64_t>(timesteps - 1);
    if (total > options.edge_budget) {
        throw resource_error("task graph would hold " + std::to_string(total) +
                             " dependency edges, exceeding the budget of " +
                             std::to_string(options.edge_budget));
    }

    TaskGraph g;
    g.topology_ = c;
    g.ranks_ = ranks;
    g.timesteps_ = timesteps;
    g.tasks_per_rank_slot_ = tasks_per_rank_slot;
    g.edges_per_transition_ = per_step;
    g.neighbors_.resize(static_cast<std::size_t>(ranks));
    g.dependents_.resize(static_cast<std::size_t>(ranks));
    for (std::int32_t i = 0; i < ranks; ++i) {
        g.neighbors_[static_cast<std::size_t>(i)] = neighborhood(c, ranks, i, options.boundary);
        for (std::int32_t j : g.neighbors_[static_cast<std::size_t>(i)]) {
            g.dependents_[static_cast<std::size_t>(j)].push_back(i);
        }
    }
    return g;
}

} // namespace granulyzer

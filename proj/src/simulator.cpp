#include "granulyzer/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

#include "granulyzer/errors.hpp"
#include "granulyzer/rng.hpp"
#include "granulyzer/stats.hpp"

namespace granulyzer {

const char* to_string(SchedulingMode m) {
    switch (m) {
    case SchedulingMode::Dynamic: return "dynamic";
    case SchedulingMode::Static: return "static";
    }
    throw internal_error("unknown SchedulingMode");
}

SchedulingMode mode_from_string(std::string_view s) {
    if (s == "dynamic") return SchedulingMode::Dynamic;
    if (s == "static") return SchedulingMode::Static;
    throw std::invalid_argument("unknown mode '" + std::string(s) +
                                "' (expected dynamic or static)");
}

namespace {

struct Arrival {
    double ready;
    std::uint64_t id;
    double duration;
    std::int32_t phase;
    std::int32_t slot;

    bool operator>(const Arrival& o) const {
        if (ready != o.ready) return ready > o.ready;
        return id > o.id;
    }
};

struct SlotCompletion {
    double time;
    std::int32_t phase;
    std::int32_t slot;

    bool operator>(const SlotCompletion& o) const {
        if (time != o.time) return time > o.time;
        if (phase != o.phase) return phase > o.phase;
        return slot > o.slot;
    }
};

// Rank-indexed segment tree over worker availability. Supports "earliest any
// worker is free" and "lowest rank free at or before t" in O(log P).
class WorkerPool {
public:
    explicit WorkerPool(int ranks) : n_(ranks) {
        size_ = 1;
        while (size_ < n_) size_ <<= 1;
        tree_.assign(static_cast<std::size_t>(2 * size_), std::numeric_limits<double>::infinity());
        for (int r = 0; r < n_; ++r) tree_[static_cast<std::size_t>(size_ + r)] = 0.0;
        for (int i = size_ - 1; i >= 1; --i) {
            tree_[static_cast<std::size_t>(i)] = std::min(tree_[static_cast<std::size_t>(2 * i)],
                                                          tree_[static_cast<std::size_t>(2 * i + 1)]);
        }
    }

    double min_free() const { return tree_[1]; }

    int acquire_lowest_rank(double at, double new_free) {
        int node = 1;
        while (node < size_) {
            node = 2 * node;
            if (tree_[static_cast<std::size_t>(node)] > at) ++node;
        }
        const int rank = node - size_;
        tree_[static_cast<std::size_t>(node)] = new_free;
        for (node /= 2; node >= 1; node /= 2) {
            tree_[static_cast<std::size_t>(node)] =
                std::min(tree_[static_cast<std::size_t>(2 * node)],
                         tree_[static_cast<std::size_t>(2 * node + 1)]);
        }
        return rank;
    }

private:
    int n_;
    int size_;
    std::vector<double> tree_;
};

void validate_config(const SimConfig& cfg, double mean_subtask_ms) {
    if (cfg.ranks < 1) throw std::invalid_argument("simulate: ranks must be >= 1");
    if (cfg.phases < 1) throw std::invalid_argument("simulate: phases must be >= 1");
    const auto& p = cfg.workload.params;
    if (p.k < 1) throw std::invalid_argument("simulate: k must be >= 1");
    if (!(p.rho >= 0.0 && p.rho <= 1.0)) {
        throw std::invalid_argument("simulate: rho must lie in [0, 1]");
    }
    if (p.tau_s_ms < 0.0 || p.tau_e_ms < 0.0) {
        throw std::invalid_argument("simulate: tau costs must be >= 0");
    }
    if (p.imbalance < 0.0) throw std::invalid_argument("simulate: imbalance must be >= 0");
    if (!(mean_subtask_ms > 0.0) || !std::isfinite(mean_subtask_ms)) {
        throw config_error("simulate: workload '" + cfg.workload.name +
                           "' yields a zero-duration phase at P=" + std::to_string(cfg.ranks));
    }
}

} // namespace

ExecutionTrace simulate(const SimConfig& cfg) {
    const auto& wl = cfg.workload;
    const int P = cfg.ranks;
    const int T = cfg.phases;
    const int k = wl.params.k;
    const double mean_subtask = kernel_time(wl, P) / static_cast<double>(k);
    validate_config(cfg, mean_subtask);

    const TaskGraph graph = TaskGraph::build(wl.topology, P, T, k, cfg.graph);
    const std::uint64_t sim_seed = hash_combine(cfg.seed, static_cast<std::uint64_t>(P));
    const double cv = wl.params.imbalance;

    // Imbalance is persistent per rank-slot: one log-normal skew factor per
    // (phase, slot), shared by the slot's k subtasks. Across a phase's subtask
    // population the coefficient of variation is exactly `imbalance`, and a
    // static partition inherits the skew while dynamic scheduling can spread
    // a heavy slot over idle ranks.
    auto duration_of = [&](std::int32_t phase, std::int32_t slot, std::int32_t sub) {
        (void)sub;
        const double skew = lognormal_sample(sim_seed, static_cast<std::uint64_t>(phase),
                                             static_cast<std::uint64_t>(slot), 1.0, cv);
        return mean_subtask * skew;
    };

    ExecutionTrace trace;
    trace.mode = cfg.mode;
    trace.ranks = P;
    trace.seed = cfg.seed;
    trace.per_phase.resize(static_cast<std::size_t>(T));
    trace.measured_edges.assign(static_cast<std::size_t>(T), 0);

    if (cfg.mode == SchedulingMode::Static) {
        // Fixed block assignment, per-phase barrier, no scheduler costs.
        double makespan = 0.0;
        for (int p = 0; p < T; ++p) {
            double worst = 0.0;
            for (int i = 0; i < P; ++i) {
                double sum = 0.0;
                for (int j = 0; j < k; ++j) sum += duration_of(p, i, j);
                worst = std::max(worst, sum);
            }
            trace.per_phase[static_cast<std::size_t>(p)] = {worst, 0.0};
            trace.measured_edges[static_cast<std::size_t>(p)] =
                p == 0 ? 0 : graph.edges_per_transition();
            makespan += worst;
        }
        trace.makespan_ms = makespan;
        return trace;
    }

    // Dynamic mode: event-driven greedy list scheduling on the work timeline.
    const auto slot_index = [P](std::int32_t phase, std::int32_t slot) {
        return static_cast<std::size_t>(phase) * static_cast<std::size_t>(P) +
               static_cast<std::size_t>(slot);
    };
    const std::size_t n_slots = static_cast<std::size_t>(T) * static_cast<std::size_t>(P);
    std::vector<std::int32_t> dep_left(n_slots, 0);
    std::vector<std::int32_t> subs_left(n_slots, k);
    std::vector<double> slot_max_end(n_slots, 0.0);

    std::priority_queue<Arrival, std::vector<Arrival>, std::greater<>> arrivals;
    std::priority_queue<SlotCompletion, std::vector<SlotCompletion>, std::greater<>> completions;
    WorkerPool workers(P);

    auto release_slot = [&](std::int32_t phase, std::int32_t slot, double ready) {
        for (int j = 0; j < k; ++j) {
            const std::uint64_t id =
                (static_cast<std::uint64_t>(phase) * P + static_cast<std::uint64_t>(slot)) * k + j;
            arrivals.push({ready, id, duration_of(phase, slot, j), phase, slot});
        }
    };

    for (int p = 0; p < T; ++p) {
        for (int i = 0; i < P; ++i) {
            const std::int32_t deps =
                p == 0 ? 0 : static_cast<std::int32_t>(graph.neighbors(i).size());
            dep_left[slot_index(p, i)] = deps;
            if (deps == 0) release_slot(p, i, 0.0);
        }
    }

    std::vector<double> phase_max_end(static_cast<std::size_t>(T), 0.0);

    auto flush_completion = [&]() {
        const SlotCompletion ev = completions.top();
        completions.pop();
        const int next = ev.phase + 1;
        if (next >= T) return;
        for (std::int32_t j : graph.dependents(ev.slot)) {
            const std::size_t si = slot_index(next, j);
            trace.measured_edges[static_cast<std::size_t>(next)] += 1;
            if (--dep_left[si] == 0) {
                // Events drain in time order, so ev.time is the max over deps.
                release_slot(next, j, ev.time);
            }
        }
    };

    const std::uint64_t total_subtasks =
        static_cast<std::uint64_t>(T) * static_cast<std::uint64_t>(P) * static_cast<std::uint64_t>(k);
    for (std::uint64_t assigned = 0; assigned < total_subtasks; ++assigned) {
        while (!completions.empty() &&
               (arrivals.empty() || completions.top().time <= arrivals.top().ready)) {
            flush_completion();
        }
        if (arrivals.empty()) {
            throw internal_error("simulate: ready queue drained with tasks outstanding");
        }
        const Arrival task = arrivals.top();
        arrivals.pop();

        // First idle rank takes the queue head; ties go to the lowest rank.
        const double start = std::max(workers.min_free(), task.ready);
        const double end = start + task.duration;
        workers.acquire_lowest_rank(start, end);

        const std::size_t si = slot_index(task.phase, task.slot);
        slot_max_end[si] = std::max(slot_max_end[si], end);
        if (--subs_left[si] == 0) {
            completions.push({slot_max_end[si], task.phase, task.slot});
            phase_max_end[static_cast<std::size_t>(task.phase)] =
                std::max(phase_max_end[static_cast<std::size_t>(task.phase)], slot_max_end[si]);
        }
    }
    // Drain remaining completion events so edge accounting covers every phase.
    while (!completions.empty()) flush_completion();

    // t_kernel is the advance of the work-completion frontier per phase; the
    // exposed scheduler time is serialized onto the makespan, never into the
    // work timeline.
    const double exposed = 1.0 - wl.params.rho;
    double frontier = 0.0;
    double overhead_total = 0.0;
    for (int p = 0; p < T; ++p) {
        const double advanced = std::max(phase_max_end[static_cast<std::size_t>(p)], frontier);
        const double t_kernel = advanced - frontier;
        frontier = advanced;
        const double t_overhead =
            exposed * (static_cast<double>(k) * wl.params.tau_s_ms +
                       wl.params.tau_e_ms *
                           static_cast<double>(trace.measured_edges[static_cast<std::size_t>(p)]));
        trace.per_phase[static_cast<std::size_t>(p)] = {t_kernel, t_overhead};
        overhead_total += t_overhead;
    }
    trace.makespan_ms = frontier + overhead_total;
    return trace;
}

ScalingSample aggregate_trace(const ExecutionTrace& trace) {
    std::vector<double> kernels, overheads;
    kernels.reserve(trace.per_phase.size());
    overheads.reserve(trace.per_phase.size());
    for (const auto& ph : trace.per_phase) {
        kernels.push_back(ph.t_kernel_ms);
        overheads.push_back(ph.t_overhead_ms);
    }
    ScalingSample s;
    s.ranks = trace.ranks;
    s.t_kernel_ms = median(std::move(kernels));
    s.t_overhead_ms = median(std::move(overheads));
    return s;
}

std::vector<ScalingSample> run_sweep(const WorkloadSpec& workload, const std::vector<int>& ranks,
                                     int phases, std::uint64_t seed, SchedulingMode mode,
                                     TaskGraphOptions graph) {
    if (ranks.empty()) {
        throw std::invalid_argument("run_sweep: ranks list must be non-empty");
    }
    for (std::size_t i = 1; i < ranks.size(); ++i) {
        if (ranks[i] <= ranks[i - 1]) {
            throw std::invalid_argument("run_sweep: ranks must be strictly ascending");
        }
    }
    std::vector<ScalingSample> out;
    out.reserve(ranks.size());
    for (int p : ranks) {
        SimConfig cfg;
        cfg.workload = workload;
        cfg.ranks = p;
        cfg.phases = phases;
        cfg.seed = seed;
        cfg.mode = mode;
        cfg.graph = graph;
        out.push_back(aggregate_trace(simulate(cfg)));
    }
    return out;
}

} // namespace granulyzer

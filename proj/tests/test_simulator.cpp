#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "granulyzer/errors.hpp"
#include "granulyzer/simulator.hpp"
#include "granulyzer/stats.hpp"

using namespace granulyzer;

namespace {

WorkloadSpec balanced_gemm(double per_rank_ms, int ranks, int k) {
    // gemm law is c * n^3; pick c so kernel_time(spec, ranks) == per_rank_ms
    WorkloadSpec spec = preset("gemm");
    spec.params.n = 2;
    spec.params.c = per_rank_ms * ranks / 8.0;
    spec.params.k = k;
    spec.params.imbalance = 0.0;
    spec.params.rho = 0.0;
    spec.params.tau_s_ms = 0.0;
    spec.params.tau_e_ms = 0.0;
    return spec;
}

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

bool traces_identical(const ExecutionTrace& a, const ExecutionTrace& b) {
    if (a.makespan_ms != b.makespan_ms || a.per_phase.size() != b.per_phase.size()) return false;
    for (std::size_t i = 0; i < a.per_phase.size(); ++i) {
        if (a.per_phase[i].t_kernel_ms != b.per_phase[i].t_kernel_ms) return false;
        if (a.per_phase[i].t_overhead_ms != b.per_phase[i].t_overhead_ms) return false;
        if (a.measured_edges[i] != b.measured_edges[i]) return false;
    }
    return true;
}

} // namespace

TEST_CASE("independent single phase: four identical tasks leave pure dispatch exposed") {
    SimConfig cfg;
    cfg.workload = balanced_gemm(10.0, 4, 1);
    cfg.workload.params.tau_s_ms = 1.0;
    cfg.ranks = 4;
    cfg.phases = 1;
    cfg.mode = SchedulingMode::Dynamic;
    const ExecutionTrace trace = simulate(cfg);
    CHECK(trace.per_phase[0].t_kernel_ms == doctest::Approx(10.0));
    CHECK(trace.per_phase[0].t_overhead_ms == doctest::Approx(1.0));
    CHECK(trace.makespan_ms == doctest::Approx(11.0));
}

TEST_CASE("static mode reports zero overhead in every phase") {
    for (const char* name : {"fft", "stencil", "sweep", "gemm"}) {
        WorkloadSpec spec = preset(name);
        spec.params.n = name == std::string("fft") ? 32.0 : 500.0;
        SimConfig cfg;
        cfg.workload = spec;
        cfg.ranks = 8;
        cfg.phases = 5;
        cfg.seed = 7;
        cfg.mode = SchedulingMode::Static;
        const ExecutionTrace trace = simulate(cfg);
        for (const auto& ph : trace.per_phase) {
            CHECK(ph.t_overhead_ms == 0.0);
            CHECK(ph.t_kernel_ms > 0.0);
        }
    }
}

TEST_CASE("global edge resolution cost appears once per transition") {
    WorkloadSpec spec = preset("fft");
    spec.params.n = 8;
    spec.params.c = 1.0;
    spec.params.k = 1;
    spec.params.rho = 0.0;
    spec.params.imbalance = 0.0;
    spec.params.tau_s_ms = 0.0;
    spec.params.tau_e_ms = 0.5;
    SimConfig cfg;
    cfg.workload = spec;
    cfg.ranks = 4;
    cfg.phases = 2;
    const ExecutionTrace trace = simulate(cfg);
    CHECK(trace.per_phase[0].t_overhead_ms == doctest::Approx(0.0));
    CHECK(trace.per_phase[1].t_overhead_ms == doctest::Approx(8.0)); // 0.5 * 16 edges
}

TEST_CASE("identical configs produce bit-identical traces") {
    for (const char* name : {"fft", "sweep", "gemm"}) {
        WorkloadSpec spec = preset(name);
        spec.params.n = name == std::string("fft") ? 64.0 : 1000.0;
        SimConfig cfg;
        cfg.workload = spec;
        cfg.ranks = 16;
        cfg.phases = 6;
        cfg.seed = 12345;
        CHECK(traces_identical(simulate(cfg), simulate(cfg)));
        cfg.mode = SchedulingMode::Static;
        CHECK(traces_identical(simulate(cfg), simulate(cfg)));
    }
}

TEST_CASE("per-phase measured edges match the closed-form edge count") {
    for (TopologyClass c : {TopologyClass::Global, TopologyClass::LocalStencil,
                            TopologyClass::LocalSweep, TopologyClass::Independent}) {
        WorkloadSpec spec;
        switch (c) {
        case TopologyClass::Global: spec = preset("fft"); spec.params.n = 32; break;
        case TopologyClass::LocalStencil: spec = preset("stencil"); spec.params.n = 300; break;
        case TopologyClass::LocalSweep: spec = preset("sweep"); spec.params.n = 300; break;
        case TopologyClass::Independent: spec = preset("gemm"); spec.params.n = 100; break;
        }
        SimConfig cfg;
        cfg.workload = spec;
        cfg.ranks = 6;
        cfg.phases = 4;
        const ExecutionTrace trace = simulate(cfg);
        CHECK(trace.measured_edges[0] == 0);
        for (int p = 1; p < cfg.phases; ++p) {
            CHECK(trace.measured_edges[static_cast<std::size_t>(p)] == edge_count(c, 6));
        }
    }
}

TEST_CASE("with zero imbalance the exposed overhead equals the closed form exactly") {
    WorkloadSpec spec = preset("stencil");
    spec.params.n = 400;
    spec.params.k = 3;
    spec.params.rho = 0.3;
    spec.params.tau_s_ms = 0.07;
    spec.params.tau_e_ms = 0.004;
    spec.params.imbalance = 0.0;
    SimConfig cfg;
    cfg.workload = spec;
    cfg.ranks = 8;
    cfg.phases = 4;
    const ExecutionTrace trace = simulate(cfg);
    const double edges = static_cast<double>(edge_count(TopologyClass::LocalStencil, 8));
    const double expected_first = 0.7 * (3 * 0.07);
    const double expected_rest = 0.7 * (3 * 0.07 + 0.004 * edges);
    CHECK(trace.per_phase[0].t_overhead_ms ==
          doctest::Approx(expected_first).epsilon(1e-9));
    for (int p = 1; p < 4; ++p) {
        CHECK(trace.per_phase[static_cast<std::size_t>(p)].t_overhead_ms ==
              doctest::Approx(expected_rest).epsilon(1e-9));
    }
}

TEST_CASE("full overlap hides all scheduler cost") {
    WorkloadSpec spec = preset("fft");
    spec.params.n = 32;
    spec.params.rho = 1.0;
    const auto samples = run_sweep(spec, {4, 8, 16}, 4, 3, SchedulingMode::Dynamic);
    for (const auto& s : samples) {
        CHECK(s.t_overhead_ms == 0.0);
    }
}

TEST_CASE("dynamic kernel never loses to the static block assignment") {
    // Same seed gives both modes the same duration multiset per phase.
    for (const char* name : {"gemm", "fft"}) {
        WorkloadSpec spec = preset(name);
        spec.params.n = name == std::string("fft") ? 64.0 : 500.0;
        REQUIRE(spec.params.k >= 2);
        REQUIRE(spec.params.imbalance > 0.0);
        for (int p : {4, 16, 64}) {
            for (std::uint64_t seed = 1; seed <= 100; ++seed) {
                const auto dyn = run_sweep(spec, {p}, 8, seed, SchedulingMode::Dynamic).front();
                const auto stat = run_sweep(spec, {p}, 8, seed, SchedulingMode::Static).front();
                CHECK(dyn.t_kernel_ms < stat.t_kernel_ms);
            }
        }
    }
}

TEST_CASE("overhead scaling laws by topology with the dispatch term suppressed") {
    const std::vector<int> ranks = {8, 16, 32, 64, 128, 256};
    auto overhead_slope = [&](WorkloadSpec spec) {
        spec.params.tau_s_ms = 0.0; // isolate the edge term
        const auto samples = run_sweep(spec, ranks, 6, 5, SchedulingMode::Dynamic);
        std::vector<double> lx, ly;
        for (const auto& s : samples) {
            lx.push_back(std::log(static_cast<double>(s.ranks)));
            ly.push_back(std::log(s.t_overhead_ms));
        }
        return regression_slope(lx, ly);
    };
    WorkloadSpec fft = preset("fft");
    fft.params.n = 64;
    CHECK(overhead_slope(fft) == doctest::Approx(2.0).epsilon(0.05));
    WorkloadSpec stencil = preset("stencil");
    stencil.params.n = 2000;
    CHECK(overhead_slope(stencil) == doctest::Approx(1.0).epsilon(0.1));
    WorkloadSpec sweep = preset("sweep");
    sweep.params.n = 2000;
    CHECK(overhead_slope(sweep) == doctest::Approx(1.0).epsilon(0.1));

    // Independent: the dispatch term is the whole overhead, so keep it.
    WorkloadSpec gemm = preset("gemm");
    gemm.params.n = 500;
    const auto samples = run_sweep(gemm, ranks, 6, 5, SchedulingMode::Dynamic);
    std::vector<double> lx, ly;
    for (const auto& s : samples) {
        lx.push_back(std::log(static_cast<double>(s.ranks)));
        ly.push_back(std::log(s.t_overhead_ms));
    }
    CHECK(regression_slope(lx, ly) == doctest::Approx(0.0).epsilon(0.1));
}

TEST_CASE("independent overhead is insensitive to scale") {
    WorkloadSpec gemm = preset("gemm");
    gemm.params.n = 500;
    const auto samples = run_sweep(gemm, {4, 8, 16}, 4, 11, SchedulingMode::Dynamic);
    for (const auto& a : samples) {
        for (const auto& b : samples) {
            CHECK(a.t_overhead_ms <= 2.0 * b.t_overhead_ms);
        }
    }
}

TEST_CASE("aggregate_trace takes per-phase medians") {
    WorkloadSpec spec = preset("stencil");
    spec.params.n = 300;
    SimConfig cfg;
    cfg.workload = spec;
    cfg.ranks = 4;
    cfg.phases = 5;
    cfg.seed = 9;
    const ExecutionTrace trace = simulate(cfg);
    std::vector<double> kernels, overheads;
    for (const auto& ph : trace.per_phase) {
        kernels.push_back(ph.t_kernel_ms);
        overheads.push_back(ph.t_overhead_ms);
    }
    const ScalingSample s = aggregate_trace(trace);
    CHECK(s.t_kernel_ms == doctest::Approx(median(kernels)));
    CHECK(s.t_overhead_ms == doctest::Approx(median(overheads)));
}

TEST_CASE("makespan decomposes into kernel plus exposed overhead") {
    WorkloadSpec spec = preset("fft");
    spec.params.n = 64;
    SimConfig cfg;
    cfg.workload = spec;
    cfg.ranks = 8;
    cfg.phases = 6;
    const ExecutionTrace trace = simulate(cfg);
    double total = 0.0;
    for (const auto& ph : trace.per_phase) total += ph.t_kernel_ms + ph.t_overhead_ms;
    CHECK(trace.makespan_ms == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("error paths") {
    WorkloadSpec fft = preset("fft");
    SimConfig big;
    big.workload = fft;
    big.ranks = 4096; // 16.7M edges per transition exceeds the default budget
    big.phases = 2;
    CHECK_THROWS_AS(simulate(big), resource_error);

    WorkloadSpec degenerate = preset("gemm");
    degenerate.params.n = 0;
    SimConfig zero;
    zero.workload = degenerate;
    CHECK_THROWS_AS(simulate(zero), config_error);

    WorkloadSpec ok = preset("gemm");
    ok.params.n = 100;
    CHECK_THROWS_AS(run_sweep(ok, {}, 4, 1, SchedulingMode::Dynamic), std::invalid_argument);
    CHECK_THROWS_AS(run_sweep(ok, {8, 4}, 4, 1, SchedulingMode::Dynamic), std::invalid_argument);
    CHECK_THROWS_AS(run_sweep(ok, {4, 4}, 4, 1, SchedulingMode::Dynamic), std::invalid_argument);
}

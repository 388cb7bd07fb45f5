#!/usr/bin/env python3
"""Smoke test for the _granulyzer extension: end-to-end sweep -> fit ->
predict -> decide, plus a few exact identities. Run with PYTHONPATH pointing
at the built extension (ctest does this automatically)."""

import math

import _granulyzer as g


def approx(a, b, rel=1e-9):
    return abs(a - b) <= rel * max(abs(a), abs(b), 1.0)


def main():
    # topology
    assert g.edge_count(g.TopologyClass.Global, 4) == 16
    assert g.edge_count(g.TopologyClass.LocalStencil, 4) == 10
    assert g.edge_count(g.TopologyClass.LocalSweep, 4) == 7
    assert g.edge_count(g.TopologyClass.Independent, 256) == 0
    assert g.neighborhood(g.TopologyClass.LocalStencil, 4, 0) == [0, 1]
    assert g.neighborhood(g.TopologyClass.Global, 4, 2) == [0, 1, 2, 3]
    assert g.decay_exponent(g.TopologyClass.Global) == -3

    # model identities
    assert approx(g.overhead_fraction_percent(1.0), 50.0)
    assert approx(g.overhead_fraction_percent(10.0), 100.0 / 11.0)
    assert approx(g.granularity(90.0, 10.0), 9.0)
    assert g.classify_regime(10.0) == g.Regime.Marginal
    assert g.classify_regime(1.0) == g.Regime.Detrimental
    assert approx(g.phase_time(10.0, 4.0, 0.5, 8, 0.25), 11.0)

    # workloads
    spec = g.preset("fft")
    assert spec.topology == g.TopologyClass.Global
    assert approx(spec.kernel_work(2) * 2, spec.work_at_one())
    assert set(g.preset_names()) >= {"fft", "stencil", "sweep", "gemm"}

    # simulate deterministically
    trace_a = g.simulate(spec, ranks=8, phases=4, seed=11, mode=g.Mode.Dynamic)
    trace_b = g.simulate(spec, ranks=8, phases=4, seed=11, mode=g.Mode.Dynamic)
    assert trace_a.makespan_ms == trace_b.makespan_ms
    assert trace_a.measured_edges == [0, 64, 64, 64]
    static = g.simulate(spec, ranks=8, phases=4, seed=11, mode=g.Mode.Static)
    assert all(ph.t_overhead_ms == 0.0 for ph in static.per_phase)

    # end-to-end pipeline
    ranks = [4, 8, 16, 32, 64, 128, 256]
    samples = g.run_sweep(spec, ranks, phases=8, seed=42, mode=g.Mode.Dynamic)
    calib = g.calibrate(spec.topology, samples)
    assert calib.overhead.form == g.OverheadForm.Quadratic
    assert calib.kernel.a > 0
    pred = g.predict_crossover(calib.overhead, calib.kernel, 256)
    assert pred.exists_in_range
    assert 64 < pred.p_star < 256

    curve = g.granularity_curve(calib.overhead, calib.kernel, ranks)
    assert [row["P"] for row in curve] == ranks
    assert curve[0]["g"] > curve[-1]["g"]

    verdict_small = g.decide(g.static_time(spec, 4, 1.3), calib.kernel, calib.overhead, 4)
    verdict_large = g.decide(g.static_time(spec, 256, 1.3), calib.kernel, calib.overhead, 256)
    assert verdict_small.choice == g.Mode.Dynamic
    assert verdict_large.choice == g.Mode.Static

    # crossover closed form
    m = g.OverheadModel(g.OverheadForm.Constant, 0.0, 10.0)
    k = g.KernelModel(1000.0)
    assert approx(g.predict_crossover(m, k, 256).p_star, 100.0)
    assert approx(g.static_time_fft(8, 2, 1.0), 768.0)

    print("smoke ok:", len(samples), "samples, p_star=%.2f" % pred.p_star)


if __name__ == "__main__":
    main()

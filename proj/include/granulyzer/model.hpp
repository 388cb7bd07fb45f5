#pragma once

#include <limits>

#include "granulyzer/topology.hpp"

namespace granulyzer {

// Inputs of the per-phase runtime model
//   T_phase = max(T_comp, T_comm) + (1 - rho) * k * tau_s.
// tau_e is the per-dependency-edge resolution cost used by the simulator's
// overhead mechanism; the phase-time expression above does not consume it.
struct PhaseParams {
    double t_comp_ms = 0.0;
    double t_comm_ms = 0.0;
    double rho = 0.0; // fraction of scheduler time hidden by overlap, in [0, 1]
    int k = 1;        // scheduled tasks per worker
    double tau_s_ms = 0.0; // per-task scheduling cost
    double tau_e_ms = 0.0; // per-edge resolution cost

    void validate() const;
};

// One measured phase, split into useful kernel time and exposed overhead.
struct PhaseTiming {
    double t_kernel_ms = 0.0;
    double t_overhead_ms = 0.0;
};

// Granularity number G = T_kernel / T_overhead. Zero measured overhead yields
// the distinguished unbounded value (+inf), which classifies as Beneficial.
struct Granularity {
    double value = 0.0;

    static Granularity unbounded() {
        return {std::numeric_limits<double>::infinity()};
    }
    bool is_unbounded() const { return value == std::numeric_limits<double>::infinity(); }
};

enum class Regime { Beneficial, Marginal, Detrimental };

const char* to_string(Regime r);

// Boundaries are exact comparisons: Beneficial G > 10, Marginal 1 < G <= 10,
// Detrimental G <= 1.
struct RegimeThresholds {
    double detrimental_max = 1.0;
    double marginal_max = 10.0;
};

double phase_time(const PhaseParams& p);
double exposed_overhead(double rho, int k, double tau_s_ms);
Granularity granularity(const PhaseTiming& t);

// Omega = 1/G, overhead relative to kernel time. 0 for unbounded G.
double overhead_ratio(Granularity g);

// Omega% = 100/(G+1), overhead relative to total phase time. 0 for unbounded G.
double overhead_fraction_percent(Granularity g);

Regime classify_regime(Granularity g, RegimeThresholds thresholds = {});

// Asymptotic decay of G under strong scaling: Global -3, Local -2, Independent -1.
int decay_exponent(TopologyClass c);

} // namespace granulyzer

#include "granulyzer/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "granulyzer/errors.hpp"

namespace granulyzer {

void PhaseParams::validate() const {
    if (!(rho >= 0.0 && rho <= 1.0)) {
        throw std::invalid_argument("PhaseParams: rho must lie in [0, 1]");
    }
    if (k < 1) {
        throw std::invalid_argument("PhaseParams: k must be >= 1");
    }
    if (t_comp_ms < 0.0 || t_comm_ms < 0.0 || tau_s_ms < 0.0 || tau_e_ms < 0.0) {
        throw std::invalid_argument("PhaseParams: durations and costs must be >= 0");
    }
}

const char* to_string(Regime r) {
    switch (r) {
    case Regime::Beneficial: return "beneficial";
    case Regime::Marginal: return "marginal";
    case Regime::Detrimental: return "detrimental";
    }
    throw internal_error("unknown Regime");
}

double phase_time(const PhaseParams& p) {
    p.validate();
    return std::max(p.t_comp_ms, p.t_comm_ms) + exposed_overhead(p.rho, p.k, p.tau_s_ms);
}

double exposed_overhead(double rho, int k, double tau_s_ms) {
    if (!(rho >= 0.0 && rho <= 1.0) || k < 1 || tau_s_ms < 0.0) {
        throw std::invalid_argument("exposed_overhead: invalid parameters");
    }
    return (1.0 - rho) * static_cast<double>(k) * tau_s_ms;
}

Granularity granularity(const PhaseTiming& t) {
    if (t.t_kernel_ms < 0.0 || t.t_overhead_ms < 0.0) {
        throw std::invalid_argument("granularity: negative phase timing");
    }
    if (t.t_overhead_ms == 0.0) {
        return Granularity::unbounded();
    }
    return {t.t_kernel_ms / t.t_overhead_ms};
}

double overhead_ratio(Granularity g) {
    if (g.is_unbounded()) {
        return 0.0;
    }
    if (!(g.value > 0.0)) {
        throw std::invalid_argument("overhead_ratio: G must be positive");
    }
    return 1.0 / g.value;
}

double overhead_fraction_percent(Granularity g) {
    if (g.is_unbounded()) {
        return 0.0;
    }
    if (!(g.value >= 0.0)) {
        throw std::invalid_argument("overhead_fraction_percent: G must be >= 0");
    }
    return 100.0 / (g.value + 1.0);
}

Regime classify_regime(Granularity g, RegimeThresholds thresholds) {
    if (g.is_unbounded() || g.value > thresholds.marginal_max) {
        return Regime::Beneficial;
    }
    if (g.value > thresholds.detrimental_max) {
        return Regime::Marginal;
    }
    return Regime::Detrimental;
}

int decay_exponent(TopologyClass c) {
    switch (c) {
    case TopologyClass::Global: return -3;
    case TopologyClass::LocalStencil:
    case TopologyClass::LocalSweep: return -2;
    case TopologyClass::Independent: return -1;
    }
    throw internal_error("unknown TopologyClass");
}

} // namespace granulyzer

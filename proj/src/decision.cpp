#include "granulyzer/decision.hpp"

#include <cmath>
#include <stdexcept>

namespace granulyzer {

double static_time_fft(double n, int ranks, double c) {
    if (n < 2.0) throw std::invalid_argument("static_time_fft: N must be >= 2");
    if (ranks < 1) throw std::invalid_argument("static_time_fft: ranks must be >= 1");
    if (!(c > 0.0)) throw std::invalid_argument("static_time_fft: c must be > 0");
    return n * n * c * n * std::log2(n) / static_cast<double>(ranks);
}

double static_time(const WorkloadSpec& spec, int ranks, double imbalance_penalty) {
    if (ranks < 1) throw std::invalid_argument("static_time: ranks must be >= 1");
    if (!(imbalance_penalty >= 1.0)) {
        throw std::invalid_argument("static_time: imbalance penalty must be >= 1");
    }
    return kernel_time(spec, ranks) * imbalance_penalty;
}

double dynamic_time_hat(const KernelModel& kernel, const OverheadModel& overhead, int ranks) {
    if (!(kernel.a > 0.0)) throw std::invalid_argument("dynamic_time_hat: kernel A must be > 0");
    if (ranks < 1) throw std::invalid_argument("dynamic_time_hat: ranks must be >= 1");
    const double p = static_cast<double>(ranks);
    return kernel.a / p + overhead.evaluate(p);
}

Verdict decide(double static_hat_ms, const KernelModel& kernel, const OverheadModel& overhead,
               int ranks) {
    if (!(static_hat_ms >= 0.0)) {
        throw std::invalid_argument("decide: static estimate must be >= 0");
    }
    Verdict v;
    v.ranks = ranks;
    v.t_static_hat_ms = static_hat_ms;
    v.t_dyn_hat_ms = dynamic_time_hat(kernel, overhead, ranks);
    v.margin_ms = v.t_static_hat_ms - v.t_dyn_hat_ms;
    v.choice = v.margin_ms > 0.0 ? SchedulingMode::Dynamic : SchedulingMode::Static;
    return v;
}

std::optional<int> decision_flip_point(const std::vector<Verdict>& verdicts) {
    bool seen_dynamic = false;
    for (const auto& v : verdicts) {
        if (v.choice == SchedulingMode::Dynamic) {
            seen_dynamic = true;
        } else if (seen_dynamic) {
            return v.ranks;
        }
    }
    return std::nullopt;
}

} // namespace granulyzer

#include "granulyzer/workloads.hpp"

#include <cmath>
#include <stdexcept>

#include "granulyzer/errors.hpp"

namespace granulyzer {

double WorkloadSpec::work_at_one() const {
    const double n = params.n;
    const double c = params.c;
    switch (kind) {
    case WorkloadKind::Fft:
        // P local 1D transforms per phase: N^2 pencils of length-N FFTs.
        return n * n * c * n * std::log2(n);
    case WorkloadKind::Stencil:
    case WorkloadKind::Sweep:
    case WorkloadKind::Spmv:
    case WorkloadKind::Conv2d:
        return c * n * n; // linear in grid points of an N x N grid
    case WorkloadKind::Gemm:
        return c * n * n * n;
    case WorkloadKind::Nbody:
        return c * n * n; // all-pairs force computation
    case WorkloadKind::Pagerank:
        return c * n * params.degree; // linear in traversed edges
    }
    throw internal_error("unknown WorkloadKind");
}

double WorkloadSpec::kernel_work(int ranks) const {
    if (ranks < 1) {
        throw std::invalid_argument("kernel_work: ranks must be >= 1");
    }
    return work_at_one() / static_cast<double>(ranks);
}

double kernel_time(const WorkloadSpec& spec, int ranks) {
    return spec.kernel_work(ranks);
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "fft", "stencil", "sweep", "gemm", "spmv", "conv2d", "pagerank", "nbody",
    };
    return names;
}

WorkloadSpec preset(std::string_view name) {
    WorkloadSpec s;
    s.name = std::string(name);
    if (name == "fft") {
        s.kind = WorkloadKind::Fft;
        s.topology = TopologyClass::Global;
        s.params.n = 512; // per-axis transform size; 384 and 768 are the other stock sizes
    } else if (name == "stencil") {
        s.kind = WorkloadKind::Stencil;
        s.topology = TopologyClass::LocalStencil;
        s.params.n = 11560;
    } else if (name == "sweep") {
        s.kind = WorkloadKind::Sweep;
        s.topology = TopologyClass::LocalSweep;
        s.params.n = 11560;
    } else if (name == "gemm") {
        s.kind = WorkloadKind::Gemm;
        s.topology = TopologyClass::Independent;
        s.params.n = 11560;
    } else if (name == "spmv") {
        s.kind = WorkloadKind::Spmv;
        s.topology = TopologyClass::LocalStencil;
        s.params.n = 21285;
    } else if (name == "conv2d") {
        s.kind = WorkloadKind::Conv2d;
        s.topology = TopologyClass::LocalStencil;
        s.params.n = 21285;
        s.params.c = 2.16e-3; // 3x3 kernel, 3 in / 16 out channels per pixel
    } else if (name == "pagerank") {
        s.kind = WorkloadKind::Pagerank;
        s.topology = TopologyClass::Global;
        s.params.n = 3.02e7; // vertices
        s.params.degree = 15.0;
    } else if (name == "nbody") {
        s.kind = WorkloadKind::Nbody;
        s.topology = TopologyClass::Global;
        s.params.n = 21285; // particles
    } else {
        std::string valid;
        for (const auto& v : preset_names()) {
            if (!valid.empty()) valid += ", ";
            valid += v;
        }
        throw std::invalid_argument("unknown workload '" + std::string(name) +
                                    "' (valid: " + valid + ")");
    }
    return s;
}

void set_param(WorkloadSpec& spec, std::string_view key, double value) {
    if (key == "N" || key == "n") {
        spec.params.n = value;
    } else if (key == "c") {
        spec.params.c = value;
    } else if (key == "degree") {
        spec.params.degree = value;
    } else if (key == "k") {
        if (value < 1.0 || value != std::floor(value)) {
            throw std::invalid_argument("k must be a positive integer");
        }
        spec.params.k = static_cast<int>(value);
    } else if (key == "rho") {
        if (!(value >= 0.0 && value <= 1.0)) {
            throw std::invalid_argument("rho must lie in [0, 1]");
        }
        spec.params.rho = value;
    } else if (key == "tau_s") {
        spec.params.tau_s_ms = value;
    } else if (key == "tau_e") {
        spec.params.tau_e_ms = value;
    } else if (key == "imbalance") {
        spec.params.imbalance = value;
    } else {
        throw std::invalid_argument("unknown workload parameter '" + std::string(key) +
                                    "' (valid: N, c, degree, k, rho, tau_s, tau_e, imbalance)");
    }
}

double get_param(const WorkloadSpec& spec, std::string_view key) {
    if (key == "N" || key == "n") return spec.params.n;
    if (key == "c") return spec.params.c;
    if (key == "degree") return spec.params.degree;
    if (key == "k") return static_cast<double>(spec.params.k);
    if (key == "rho") return spec.params.rho;
    if (key == "tau_s") return spec.params.tau_s_ms;
    if (key == "tau_e") return spec.params.tau_e_ms;
    if (key == "imbalance") return spec.params.imbalance;
    throw std::invalid_argument("unknown workload parameter '" + std::string(key) + "'");
}

} // namespace granulyzer

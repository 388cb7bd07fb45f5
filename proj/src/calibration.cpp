#include "granulyzer/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "granulyzer/errors.hpp"
#include "granulyzer/stats.hpp"

namespace granulyzer {

const char* to_string(OverheadForm f) {
    switch (f) {
    case OverheadForm::Quadratic: return "quadratic";
    case OverheadForm::Linear: return "linear";
    case OverheadForm::Constant: return "constant";
    }
    throw internal_error("unknown OverheadForm");
}

OverheadForm overhead_form_from_string(std::string_view s) {
    if (s == "quadratic") return OverheadForm::Quadratic;
    if (s == "linear") return OverheadForm::Linear;
    if (s == "constant") return OverheadForm::Constant;
    throw std::invalid_argument("unknown overhead form '" + std::string(s) +
                                "' (expected quadratic, linear, constant)");
}

OverheadForm overhead_form_for(TopologyClass c) {
    switch (c) {
    case TopologyClass::Global: return OverheadForm::Quadratic;
    case TopologyClass::LocalStencil:
    case TopologyClass::LocalSweep: return OverheadForm::Linear;
    case TopologyClass::Independent: return OverheadForm::Constant;
    }
    throw internal_error("unknown TopologyClass");
}

double OverheadModel::evaluate(double ranks) const {
    switch (form) {
    case OverheadForm::Quadratic: return alpha * ranks * ranks + beta;
    case OverheadForm::Linear: return alpha * ranks + beta;
    case OverheadForm::Constant: return beta;
    }
    throw internal_error("unknown OverheadForm");
}

namespace {

void validate_samples(const std::vector<ScalingSample>& samples) {
    for (const auto& s : samples) {
        if (s.ranks < 1) {
            throw std::invalid_argument("ScalingSample: ranks must be >= 1");
        }
        if (!(s.t_kernel_ms > 0.0)) {
            throw std::invalid_argument("ScalingSample: t_kernel must be > 0");
        }
        if (s.t_overhead_ms < 0.0) {
            throw std::invalid_argument("ScalingSample: t_overhead must be >= 0");
        }
    }
}

// Least squares of y on (x, 1) with both coefficients constrained to be
// nonnegative. The unconstrained optimum is used when feasible; otherwise the
// better of the two boundary solutions.
struct NnlsLine {
    double slope = 0.0;
    double intercept = 0.0;
    bool slope_clamped = false;
    bool intercept_clamped = false;
};

NnlsLine nnls_line(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("fit_overhead: need samples at >= 2 distinct rank counts");
    }
    NnlsLine r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    if (r.slope >= 0.0 && r.intercept >= 0.0) {
        return r;
    }
    auto sse = [&](double a, double b) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double e = y[i] - (a * x[i] + b);
            s += e * e;
        }
        return s;
    };
    // Boundary candidates: slope pinned to 0, or intercept pinned to 0.
    double sxx0 = 0.0, sxy0 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx0 += x[i] * x[i];
        sxy0 += x[i] * y[i];
    }
    const double b_only = std::max(0.0, my);
    const double a_only = std::max(0.0, sxx0 > 0.0 ? sxy0 / sxx0 : 0.0);
    NnlsLine cand_b{0.0, b_only, true, b_only != my};
    NnlsLine cand_a{a_only, 0.0, false, true};
    return sse(cand_b.slope, cand_b.intercept) <= sse(cand_a.slope, cand_a.intercept) ? cand_b
                                                                                      : cand_a;
}

double rms_residual_kernel(const KernelModel& m, const std::vector<ScalingSample>& samples) {
    double s = 0.0;
    for (const auto& p : samples) {
        const double e = p.t_kernel_ms - m.a / p.ranks;
        s += e * e;
    }
    return std::sqrt(s / static_cast<double>(samples.size()));
}

double rms_residual_overhead(const OverheadModel& m, const std::vector<ScalingSample>& samples) {
    double s = 0.0;
    for (const auto& p : samples) {
        const double e = p.t_overhead_ms - m.evaluate(p.ranks);
        s += e * e;
    }
    return std::sqrt(s / static_cast<double>(samples.size()));
}

} // namespace

KernelModel fit_kernel(const std::vector<ScalingSample>& samples) {
    if (samples.empty()) {
        throw std::invalid_argument("fit_kernel: need >= 1 sample");
    }
    validate_samples(samples);
    double num = 0.0, den = 0.0;
    for (const auto& s : samples) {
        const double p = static_cast<double>(s.ranks);
        num += s.t_kernel_ms / p;
        den += 1.0 / (p * p);
    }
    return {num / den};
}

OverheadModel fit_overhead(TopologyClass c, const std::vector<ScalingSample>& samples) {
    validate_samples(samples);
    const OverheadForm form = overhead_form_for(c);
    OverheadModel m;
    m.form = form;
    if (form == OverheadForm::Constant) {
        if (samples.empty()) {
            throw std::invalid_argument("fit_overhead: constant form needs >= 1 sample");
        }
        std::vector<double> y;
        y.reserve(samples.size());
        for (const auto& s : samples) y.push_back(s.t_overhead_ms);
        m.beta = median(std::move(y));
        return m;
    }
    if (samples.size() < 2) {
        throw std::invalid_argument(std::string("fit_overhead: ") + to_string(form) +
                                    " form needs >= 2 samples");
    }
    std::vector<double> x, y;
    x.reserve(samples.size());
    y.reserve(samples.size());
    for (const auto& s : samples) {
        const double p = static_cast<double>(s.ranks);
        x.push_back(form == OverheadForm::Quadratic ? p * p : p);
        y.push_back(s.t_overhead_ms);
    }
    const NnlsLine line = nnls_line(x, y);
    m.alpha = line.slope;
    m.beta = line.intercept;
    m.alpha_clamped = line.slope_clamped;
    m.beta_clamped = line.intercept_clamped;
    return m;
}

std::vector<ScalingSample> pre_collapse_filter(TopologyClass c,
                                               const std::vector<ScalingSample>& samples,
                                               const KernelModel& kernel) {
    if (samples.size() < 2) {
        throw std::invalid_argument("pre_collapse_filter: need >= 2 samples");
    }
    validate_samples(samples);
    std::vector<ScalingSample> full = samples;
    std::sort(full.begin(), full.end(),
              [](const ScalingSample& a, const ScalingSample& b) { return a.ranks < b.ranks; });
    const std::vector<ScalingSample> floor_pair(full.begin(), full.begin() + 2);

    std::vector<ScalingSample> retained = full;
    for (int iter = 0; iter < 5; ++iter) {
        const OverheadModel model = fit_overhead(c, retained);
        const CrossoverPrediction pred =
            predict_crossover(model, kernel, std::numeric_limits<int>::max());
        std::vector<ScalingSample> next;
        if (!std::isfinite(pred.p_star)) {
            next = full; // no collapse region
        } else {
            for (const auto& s : full) {
                if (static_cast<double>(s.ranks) <= pred.p_star) next.push_back(s);
            }
            if (next.size() < 2) next = floor_pair;
        }
        if (next.size() == retained.size()) {
            bool same = true;
            for (std::size_t i = 0; i < next.size(); ++i) {
                if (next[i].ranks != retained[i].ranks) {
                    same = false;
                    break;
                }
            }
            if (same) break;
        }
        retained = std::move(next);
    }
    return retained;
}

CrossoverPrediction predict_crossover(const OverheadModel& model, const KernelModel& kernel,
                                      int range_hi) {
    if (!(kernel.a > 0.0)) {
        throw std::invalid_argument("predict_crossover: kernel A must be > 0");
    }
    if (model.alpha < 0.0 || model.beta < 0.0) {
        throw std::invalid_argument("predict_crossover: model parameters must be >= 0");
    }
    const double a = kernel.a;
    const double inf = std::numeric_limits<double>::infinity();
    double p_star = inf;

    switch (model.form) {
    case OverheadForm::Constant:
        if (model.beta > 0.0) p_star = a / model.beta;
        break;
    case OverheadForm::Linear:
        if (model.alpha > 0.0) {
            // stable root of alpha*P^2 + beta*P - a = 0
            p_star = 2.0 * a / (model.beta + std::sqrt(model.beta * model.beta + 4.0 * model.alpha * a));
        } else if (model.beta > 0.0) {
            p_star = a / model.beta;
        }
        break;
    case OverheadForm::Quadratic:
        if (model.alpha > 0.0) {
            // f(P) = alpha*P^3 + beta*P - a is strictly increasing, so the
            // positive root is unique. Bisect to full double precision.
            auto f = [&](double p) { return model.alpha * p * p * p + model.beta * p - a; };
            double lo = 0.0;
            double hi = 1.0;
            while (f(hi) < 0.0 && hi < 1e18) hi *= 2.0;
            for (int i = 0; i < 200; ++i) {
                const double mid = 0.5 * (lo + hi);
                if (mid == lo || mid == hi) break;
                if (f(mid) < 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            p_star = 0.5 * (lo + hi);
        } else if (model.beta > 0.0) {
            p_star = a / model.beta;
        }
        break;
    }

    CrossoverPrediction out;
    out.p_star = p_star;
    out.range_hi = range_hi;
    out.exists_in_range = std::isfinite(p_star) && p_star <= static_cast<double>(range_hi);
    return out;
}

std::vector<CurvePoint> granularity_curve(const OverheadModel& model, const KernelModel& kernel,
                                          const std::vector<int>& ranks) {
    if (!(kernel.a > 0.0)) {
        throw std::invalid_argument("granularity_curve: kernel A must be > 0");
    }
    std::vector<CurvePoint> out;
    out.reserve(ranks.size());
    for (int p : ranks) {
        if (p < 1) {
            throw std::invalid_argument("granularity_curve: ranks must be >= 1");
        }
        PhaseTiming t;
        t.t_kernel_ms = kernel.a / static_cast<double>(p);
        t.t_overhead_ms = model.evaluate(static_cast<double>(p));
        CurvePoint cp;
        cp.ranks = p;
        cp.g = granularity(t);
        cp.omega_pct = overhead_fraction_percent(cp.g);
        cp.regime = classify_regime(cp.g);
        out.push_back(cp);
    }
    return out;
}

CalibrationResult calibrate(TopologyClass c, const std::vector<ScalingSample>& samples) {
    CalibrationResult r;
    r.kernel = fit_kernel(samples);
    std::vector<ScalingSample> retained = samples;
    if (overhead_form_for(c) == OverheadForm::Quadratic && samples.size() >= 2) {
        retained = pre_collapse_filter(c, samples, r.kernel);
    }
    r.overhead = fit_overhead(c, retained);
    r.diagnostics.kernel_rms_residual = rms_residual_kernel(r.kernel, samples);
    r.diagnostics.overhead_rms_residual = rms_residual_overhead(r.overhead, retained);
    r.diagnostics.points_used = static_cast<int>(retained.size());
    r.diagnostics.filtered = retained.size() < samples.size();
    return r;
}

} // namespace granulyzer

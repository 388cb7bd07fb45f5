#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "granulyzer/calibration.hpp"
#include "granulyzer/rng.hpp"

using namespace granulyzer;

namespace {

// Brute-force oracle: dense 1-D grid minimization of the kernel SSE.
double grid_fit_kernel(const std::vector<ScalingSample>& samples, double lo, double hi,
                       double step) {
    double best_a = lo, best_sse = std::numeric_limits<double>::infinity();
    for (double a = lo; a <= hi; a += step) {
        double sse = 0;
        for (const auto& s : samples) {
            const double e = s.t_kernel_ms - a / s.ranks;
            sse += e * e;
        }
        if (sse < best_sse) {
            best_sse = sse;
            best_a = a;
        }
    }
    return best_a;
}

// Brute-force oracle: dense 2-D grid minimization of the overhead SSE.
std::pair<double, double> grid_fit_overhead(const std::vector<ScalingSample>& samples,
                                            OverheadForm form, double alpha_lo, double alpha_hi,
                                            double alpha_step, double beta_lo, double beta_hi,
                                            double beta_step) {
    double best_a = alpha_lo, best_b = beta_lo;
    double best_sse = std::numeric_limits<double>::infinity();
    for (double a = alpha_lo; a <= alpha_hi; a += alpha_step) {
        for (double b = beta_lo; b <= beta_hi; b += beta_step) {
            double sse = 0;
            for (const auto& s : samples) {
                const double x = form == OverheadForm::Quadratic
                                     ? static_cast<double>(s.ranks) * s.ranks
                                     : static_cast<double>(s.ranks);
                const double e = s.t_overhead_ms - (a * x + b);
                sse += e * e;
            }
            if (sse < best_sse) {
                best_sse = sse;
                best_a = a;
                best_b = b;
            }
        }
    }
    return {best_a, best_b};
}

std::vector<ScalingSample> synth(const std::vector<int>& ranks, double a, double alpha,
                                 double beta, OverheadForm form) {
    std::vector<ScalingSample> out;
    for (int p : ranks) {
        const double x = form == OverheadForm::Quadratic ? static_cast<double>(p) * p
                                                         : static_cast<double>(p);
        out.push_back({p, a / p, form == OverheadForm::Constant ? beta : alpha * x + beta});
    }
    return out;
}

const std::vector<int> kSweep = {4, 8, 16, 32, 64, 128, 256};

} // namespace

TEST_CASE("fit_kernel recovers noiseless data exactly") {
    CHECK(fit_kernel({{4, 250, 0}, {8, 125, 0}, {16, 62.5, 0}}).a == doctest::Approx(1000.0));
    CHECK(fit_kernel({{10, 5, 0}}).a == doctest::Approx(50.0));
    CHECK_THROWS_AS(fit_kernel({}), std::invalid_argument);
}

TEST_CASE("fit_kernel under 5% multiplicative noise stays near truth and matches the grid oracle") {
    std::vector<ScalingSample> samples;
    std::uint64_t h = 2024;
    for (int p : kSweep) {
        h = splitmix64(h);
        const double noise = 1.0 + 0.05 * (2.0 * u64_to_unit(h) - 1.0);
        samples.push_back({p, 1000.0 / p * noise, 0.0});
    }
    const double fitted = fit_kernel(samples).a;
    CHECK(fitted > 900.0);
    CHECK(fitted < 1100.0);
    const double oracle = grid_fit_kernel(samples, 800.0, 1200.0, 0.01);
    CHECK(std::abs(fitted - oracle) <= 0.02);
}

TEST_CASE("fit_overhead recovers exact generating parameters") {
    const auto quad = fit_overhead(TopologyClass::Global,
                                   synth({4, 8, 16, 32}, 1, 0.5, 2.0, OverheadForm::Quadratic));
    CHECK(quad.form == OverheadForm::Quadratic);
    CHECK(quad.alpha == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(quad.beta == doctest::Approx(2.0).epsilon(1e-12));

    const auto lin =
        fit_overhead(TopologyClass::LocalStencil, synth(kSweep, 1, 0.1, 1.0, OverheadForm::Linear));
    CHECK(lin.form == OverheadForm::Linear);
    CHECK(lin.alpha == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(lin.beta == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("independent fit is the median, robust to one outlier") {
    const std::vector<ScalingSample> samples = {
        {4, 1, 3.0}, {8, 1, 3.1}, {16, 1, 2.9}, {32, 1, 10.0}};
    const auto m = fit_overhead(TopologyClass::Independent, samples);
    CHECK(m.form == OverheadForm::Constant);
    CHECK(m.beta == doctest::Approx(3.05));
}

TEST_CASE("negative fitted parameters are clamped and flagged") {
    // y = 0.009 P - 0.006: tiny negative intercept from a pure edge term
    std::vector<ScalingSample> samples;
    for (int p : kSweep) samples.push_back({p, 1.0, 0.009 * p - 0.006});
    const auto m = fit_overhead(TopologyClass::LocalSweep, samples);
    CHECK(m.beta == 0.0);
    CHECK(m.beta_clamped);
    CHECK(m.alpha > 0.0);
    CHECK(!m.alpha_clamped);
    // clamped fit must still be the best nonnegative fit per the grid oracle
    const auto [ga, gb] =
        grid_fit_overhead(samples, OverheadForm::Linear, 0.0, 0.02, 1e-5, 0.0, 0.01, 1e-4);
    CHECK(m.alpha == doctest::Approx(ga).epsilon(1e-3));
    CHECK(m.beta == doctest::Approx(gb).epsilon(1e-3));
}

TEST_CASE("fit_overhead enforces sample minimums by form") {
    CHECK_THROWS_AS(fit_overhead(TopologyClass::Global, {{4, 1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_overhead(TopologyClass::LocalStencil, {{4, 1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_overhead(TopologyClass::Independent, {}), std::invalid_argument);
    CHECK_THROWS_AS(fit_overhead(TopologyClass::Global, {{4, 1, 1}, {4, 1, 2}}),
                    std::invalid_argument); // needs distinct P
    CHECK_NOTHROW(fit_overhead(TopologyClass::Independent, {{4, 1, 1}}));
}

TEST_CASE("fit_overhead under 5% noise recovers within 10% and matches the grid oracle") {
    // Truth alpha=0.5, beta=5000: both terms contribute across the sweep.
    std::vector<ScalingSample> samples;
    std::uint64_t h = 77;
    for (int p : kSweep) {
        h = splitmix64(h);
        const double noise = 1.0 + 0.05 * (2.0 * u64_to_unit(h) - 1.0);
        samples.push_back({p, 1000.0 / p, (0.5 * p * p + 5000.0) * noise});
    }
    const auto m = fit_overhead(TopologyClass::Global, samples);
    CHECK(std::abs(m.alpha - 0.5) / 0.5 < 0.10);
    CHECK(std::abs(m.beta - 5000.0) / 5000.0 < 0.10);
    const auto [ga, gb] = grid_fit_overhead(samples, OverheadForm::Quadratic, 0.4, 0.6, 0.0005,
                                            4500.0, 5500.0, 2.5);
    CHECK(std::abs(m.alpha - ga) <= 0.001);
    CHECK(std::abs(m.beta - gb) <= 5.0);
}

TEST_CASE("predict_crossover closed forms") {
    OverheadModel quad{OverheadForm::Quadratic, 0.001, 0.0, false, false};
    CHECK(predict_crossover(quad, {1000.0}, 256).p_star == doctest::Approx(100.0).epsilon(1e-9));

    OverheadModel lin{OverheadForm::Linear, 0.1, 0.0, false, false};
    CHECK(predict_crossover(lin, {1000.0}, 256).p_star == doctest::Approx(100.0).epsilon(1e-9));

    OverheadModel cst{OverheadForm::Constant, 0.0, 10.0, false, false};
    const auto pc = predict_crossover(cst, {1000.0}, 256);
    CHECK(pc.p_star == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(pc.exists_in_range);

    OverheadModel none{OverheadForm::Constant, 0.0, 0.0, false, false};
    const auto pn = predict_crossover(none, {1000.0}, 256);
    CHECK(!pn.exists_in_range);
    CHECK(std::isinf(pn.p_star));
}

TEST_CASE("quadratic crossover via bisection verifies by substitution") {
    OverheadModel m{OverheadForm::Quadratic, 0.5, 2.0, false, false};
    const KernelModel kernel{50000.0};
    const auto p = predict_crossover(m, kernel, 256);
    CHECK(p.p_star > 46.3);
    CHECK(p.p_star < 46.5);
    const double residual = m.evaluate(p.p_star) - kernel.a / p.p_star;
    CHECK(std::abs(residual) < 1e-6 * kernel.a / p.p_star);
}

TEST_CASE("random crossover roots satisfy the defining identity") {
    std::uint64_t h = 5150;
    for (OverheadForm form :
         {OverheadForm::Quadratic, OverheadForm::Linear, OverheadForm::Constant}) {
        for (int trial = 0; trial < 400; ++trial) {
            h = splitmix64(h);
            const double alpha = std::pow(10.0, -5.0 + 5.0 * u64_to_unit(h));
            h = splitmix64(h);
            const double beta = 10.0 * u64_to_unit(h);
            h = splitmix64(h);
            const double a = std::pow(10.0, 6.0 * u64_to_unit(h));
            OverheadModel m;
            m.form = form;
            m.alpha = form == OverheadForm::Constant ? 0.0 : alpha;
            m.beta = form == OverheadForm::Constant ? beta + 1e-6 : beta;
            const auto pred = predict_crossover(m, {a}, 1 << 30);
            REQUIRE(std::isfinite(pred.p_star));
            const double residual = m.evaluate(pred.p_star) - a / pred.p_star;
            CHECK(std::abs(residual) < 1e-6 * a / pred.p_star);
            const double g = (a / pred.p_star) / m.evaluate(pred.p_star);
            CHECK(std::abs(g - 1.0) < 1e-6);
        }
    }
}

TEST_CASE("crossover is monotone in the model parameters") {
    std::uint64_t h = 31337;
    for (int trial = 0; trial < 300; ++trial) {
        h = splitmix64(h);
        const double alpha = std::pow(10.0, -4.0 + 3.0 * u64_to_unit(h));
        h = splitmix64(h);
        const double beta = 5.0 * u64_to_unit(h);
        h = splitmix64(h);
        const double a = 10.0 + 1e5 * u64_to_unit(h);
        OverheadModel m{OverheadForm::Quadratic, alpha, beta, false, false};
        const double base = predict_crossover(m, {a}, 1 << 30).p_star;
        OverheadModel more_alpha = m;
        more_alpha.alpha *= 2.0;
        CHECK(predict_crossover(more_alpha, {a}, 1 << 30).p_star <= base);
        OverheadModel more_beta = m;
        more_beta.beta += 1.0;
        CHECK(predict_crossover(more_beta, {a}, 1 << 30).p_star <= base);
        CHECK(predict_crossover(m, {a * 2.0}, 1 << 30).p_star >= base);
    }
}

TEST_CASE("pre_collapse_filter keeps everything when no collapse exists") {
    const auto samples = synth(kSweep, 1e9, 0.001, 0.1, OverheadForm::Quadratic);
    const auto kept = pre_collapse_filter(TopologyClass::Global, samples, fit_kernel(samples));
    CHECK(kept.size() == samples.size());
}

TEST_CASE("pre_collapse_filter trims inflated post-collapse points and rescues the fit") {
    // Truth: alpha=0.001, beta=0.1, A=1010 puts the crossover just under 100.
    const double alpha = 0.001, beta = 0.1, a = 1010.0;
    std::vector<ScalingSample> samples;
    for (int p : kSweep) {
        double overhead = alpha * p * p + beta;
        if (p >= 128) overhead *= 2.0; // post-collapse inflation
        samples.push_back({p, a / p, overhead});
    }
    const KernelModel kernel = fit_kernel(samples);
    const auto kept = pre_collapse_filter(TopologyClass::Global, samples, kernel);
    CHECK(kept.size() == 5);
    CHECK(kept.back().ranks == 64);

    const auto filtered_fit = fit_overhead(TopologyClass::Global, kept);
    CHECK(std::abs(filtered_fit.alpha - alpha) / alpha < 0.05);
    const auto unfiltered_fit = fit_overhead(TopologyClass::Global, samples);
    CHECK(std::abs(unfiltered_fit.alpha - alpha) / alpha > 0.20);
}

TEST_CASE("pre_collapse_filter never shrinks below the smallest-P pair") {
    std::vector<ScalingSample> samples = {{4, 0.25, 100.0}, {8, 0.125, 200.0}, {16, 0.0625, 300.0}};
    const auto kept = pre_collapse_filter(TopologyClass::Global, samples, fit_kernel(samples));
    CHECK(kept.size() >= 2);
    CHECK(kept[0].ranks == 4);
    CHECK(kept[1].ranks == 8);
    CHECK_THROWS_AS(pre_collapse_filter(TopologyClass::Global, {{4, 1, 1}}, KernelModel{1.0}),
                    std::invalid_argument);
}

TEST_CASE("granularity_curve follows the decay laws and pins G(P*) to 1") {
    const KernelModel kernel{1000.0};
    OverheadModel cst{OverheadForm::Constant, 0.0, 10.0, false, false};
    const auto curve = granularity_curve(cst, kernel, {8, 16, 32});
    CHECK(curve[1].g.value == doctest::Approx(curve[0].g.value / 2.0));
    CHECK(curve[2].g.value == doctest::Approx(curve[0].g.value / 4.0));

    OverheadModel quad{OverheadForm::Quadratic, 0.001, 0.0, false, false};
    const auto qc = granularity_curve(quad, kernel, {10, 20, 40});
    CHECK(qc[1].g.value == doctest::Approx(qc[0].g.value / 8.0));

    const auto pred = predict_crossover(quad, kernel, 1 << 20);
    const int p_star_int = static_cast<int>(pred.p_star + 0.5);
    const auto at_star = granularity_curve(quad, kernel, {p_star_int});
    CHECK(at_star[0].g.value == doctest::Approx(1.0).epsilon(0.02));

    OverheadModel zero{OverheadForm::Constant, 0.0, 0.0, false, false};
    const auto unbounded = granularity_curve(zero, kernel, {4});
    CHECK(unbounded[0].g.is_unbounded());
    CHECK(unbounded[0].regime == Regime::Beneficial);
}

TEST_CASE("fit idempotence on model-generated data") {
    for (OverheadForm form :
         {OverheadForm::Quadratic, OverheadForm::Linear, OverheadForm::Constant}) {
        const double alpha = 0.002, beta = 0.7, a = 1234.5;
        const auto samples = synth(kSweep, a, alpha, beta, form);
        CHECK(fit_kernel(samples).a == doctest::Approx(a).epsilon(1e-9));
        TopologyClass c = form == OverheadForm::Quadratic ? TopologyClass::Global
                          : form == OverheadForm::Linear ? TopologyClass::LocalStencil
                                                         : TopologyClass::Independent;
        const auto m = fit_overhead(c, samples);
        if (form != OverheadForm::Constant) {
            CHECK(m.alpha == doctest::Approx(alpha).epsilon(1e-9));
        }
        CHECK(m.beta == doctest::Approx(beta).epsilon(1e-9));
    }
}

TEST_CASE("calibrate applies the filter for the quadratic form and reports diagnostics") {
    const double alpha = 0.001, beta = 0.1, a = 1010.0;
    std::vector<ScalingSample> samples;
    for (int p : kSweep) {
        double overhead = alpha * p * p + beta;
        if (p >= 128) overhead *= 2.0;
        samples.push_back({p, a / p, overhead});
    }
    const auto result = calibrate(TopologyClass::Global, samples);
    CHECK(result.diagnostics.filtered);
    CHECK(result.diagnostics.points_used == 5);
    CHECK(std::abs(result.overhead.alpha - alpha) / alpha < 0.05);
    CHECK(result.diagnostics.overhead_rms_residual < 1e-9);

    const auto lin = calibrate(TopologyClass::LocalStencil,
                               synth(kSweep, 500.0, 0.01, 0.2, OverheadForm::Linear));
    CHECK(!lin.diagnostics.filtered);
    CHECK(lin.diagnostics.points_used == static_cast<int>(kSweep.size()));
}

TEST_CASE("sample validation") {
    CHECK_THROWS_AS(fit_kernel({{0, 1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_kernel({{4, 0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_kernel({{4, 1, -1}}), std::invalid_argument);
    CHECK_THROWS_AS(predict_crossover(OverheadModel{}, {0.0}, 10), std::invalid_argument);
}

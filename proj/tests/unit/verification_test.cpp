#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "test_support.hpp"
#include "wavebif/verification.hpp"

namespace wavebif {
namespace {

using testing::kPi;

ModelParams sqrt2_model() { return ModelParams::make(1, parse_mass("sqrt2")); }

// ∫_0^{2π} sin^q(x) sin(kx) dx by the trapezoid rule (exact for 256 nodes)
double integral_oracle(int q, int k) {
    const int N = 256;
    double acc = 0.0;
    for (int i = 0; i < N; ++i) {
        const double x = 2 * kPi * i / N;
        acc += std::pow(std::sin(x), q) * std::sin(k * x);
    }
    return acc * 2 * kPi / N;
}

TEST(VanishingIntegral, Examples) {
    const VanishingIntegralReport r = check_vanishing_integral(1, 8);
    EXPECT_TRUE(r.passed);
    EXPECT_TRUE(r.entries[4].exact_zero);  // k = 5
    EXPECT_EQ(r.entries[4].exact, 0.0);
    EXPECT_NEAR(r.entries[2].exact, -kPi / 4, 1e-15);  // k = 3
    EXPECT_NEAR(r.entries[0].exact, 3 * kPi / 4, 1e-15);  // k = 1
}

TEST(VanishingIntegral, AgreesWithQuadratureForSeveralExponents) {
    for (int p = 1; p <= 3; ++p) {
        const VanishingIntegralReport r = check_vanishing_integral(p, 64);
        EXPECT_TRUE(r.passed) << "p = " << p;
        EXPECT_LE(r.max_float_above, 1e-13);
        for (const VanishingIntegralEntry& e : r.entries) {
            EXPECT_NEAR(e.exact, integral_oracle(2 * p + 1, e.k), 1e-13);
            if (e.k > 2 * p + 1) EXPECT_TRUE(e.exact_zero);
            if (e.k <= 2 * p + 1 && e.k % 2 == 1) EXPECT_FALSE(e.exact_zero);
        }
    }
}

TEST(VanishProjection, Examples) {
    EXPECT_TRUE(check_vanish_projection(1, 3).vanishes);
    EXPECT_TRUE(check_vanish_projection(2, 5).vanishes);
    const VanishProjectionReport below = check_vanish_projection(1, 2);
    EXPECT_FALSE(below.exact_zero);
    // largest survivor is -(3/16) sin t sin 3x, i.e. |c_{±1,3}| = 3/32
    EXPECT_NEAR(below.direct_max, 3.0 / 32.0, 1e-16);
}

TEST(PdeResidual, ZeroAmplitude) {
    const ModelParams P = sqrt2_model();
    EXPECT_EQ(pde_residual(kernel_mode(0.0, P.trunc), 0.0, P.omega1(), 0.0, P), 0.0);
}

TEST(PdeResidual, ConvergedPointAndPerturbation) {
    const ModelParams P = sqrt2_model();
    const BranchPoint bp = solve_point(1e-2, P);
    EXPECT_LE(bp.resid_pde, 1e-10);
    const SpectralField bumped = bp.u(P) + make_field(real_mode(3, 5, 1e-6, 0.0), P.trunc);
    const double r = pde_residual(bumped, bp.rho, bp.omega, bp.alpha, P);
    EXPECT_GT(r, 1e3 * bp.resid_pde);
    EXPECT_GT(r, 1e-6);
}

TEST(PdeResidual, DoesNotGrowUnderTruncationDoubling) {
    const ModelParams P = sqrt2_model();
    ModelParams Q = P;
    Q.trunc = {128, 128};
    const BranchPoint a = solve_point(1e-2, P);
    const BranchPoint b = solve_point(1e-2, Q);
    EXPECT_LE(b.resid_pde, std::max(a.resid_pde, 1e-15));
    EXPECT_LE(testing::rel_diff(a.alpha, b.alpha), 1e-10);
    EXPECT_LE(testing::rel_diff(a.omega, b.omega), 1e-10);
}

TEST(SolutionForm, KernelPartAndExponent) {
    const ModelParams P = sqrt2_model();
    const auto rows = trace_branch(log_grid(1e-3, 1e-2, 4), P);
    std::vector<BranchPoint> points;
    for (const BranchRow& r : rows) {
        ASSERT_TRUE(r.point);
        points.push_back(*r.point);
        const SolutionFormReport t = check_solution_form(*r.point, P);
        EXPECT_TRUE(t.kernel_exact);
        EXPECT_EQ(t.within_ball, t.v_norm <= t.ball_radius);
        EXPECT_GT(t.ball_crossover_rho, 0.0);
    }
    const LogLogFit fit = fit_v_exponent(points);
    EXPECT_GE(fit.slope, 2.5);
    EXPECT_NEAR(fit.slope, 3.0, 0.01);
}

TEST(LogLogFit, RecoversPowerLaw) {
    const LogLogFit f = fit_loglog({1.0, 2.0, 4.0, 8.0}, {3.0, 3.0 * 8, 3.0 * 64, 3.0 * 512});
    EXPECT_NEAR(f.slope, 3.0, 1e-12);
    EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-12);
}

TEST(Smoothness, ConvergedSpectrumDecaysGeometrically) {
    const ModelParams P = sqrt2_model();
    const BranchPoint bp = solve_point(1e-2, P);
    const SmoothnessReport r = check_smoothness(bp.u(P), P.k0);
    EXPECT_TRUE(r.passed);
    EXPECT_TRUE(r.finite_norm);
    EXPECT_TRUE(r.geometric);
    EXPECT_LT(r.geometric_rate, 0.0);
    EXPECT_LT(r.tail_relative, 1e-20);
}

TEST(Smoothness, ZeroFieldIsVacuous) {
    const SmoothnessReport r = check_smoothness(SpectralField{}, 2);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.norm, 0.0);
}

TEST(Smoothness, AlgebraicTailIsFlagged) {
    std::vector<FieldEntry> e;
    for (int n = 1; n <= 60; n += 2) {
        for (const FieldEntry& x : real_mode(n, 1, 1.0 / (n * n), 0.0)) e.push_back(x);
    }
    const SmoothnessReport r = check_smoothness(make_field(e), 2);
    EXPECT_FALSE(r.geometric);
    EXPECT_FALSE(r.passed);
    EXPECT_GT(r.tail_relative, 1e-4);
}

TEST(Suite, QuickRunPassesFast) {
    const auto start = std::chrono::steady_clock::now();
    const auto checks = run_verification_suite(sqrt2_model(), {.quick = true});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_LT(secs, 5.0);
    for (const CheckResult& c : checks) EXPECT_NE(c.status, CheckStatus::Fail) << c.name << ": " << c.detail;
}

TEST(Suite, RationalMassWarnsOnKernelScan) {
    const ModelParams P = ModelParams::make(1, parse_mass("1.0"));
    const auto checks = run_verification_suite(P, {.quick = true});
    const auto it = std::find_if(checks.begin(), checks.end(), [](const CheckResult& c) { return c.name == "kernel_scan"; });
    ASSERT_NE(it, checks.end());
    EXPECT_EQ(it->status, CheckStatus::Warn);
}

}  // namespace
}  // namespace wavebif

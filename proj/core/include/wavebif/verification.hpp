#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wavebif/bifurcation.hpp"
#include "wavebif/params.hpp"
#include "wavebif/spectral_field.hpp"

namespace wavebif {

// ---------------------------------------------------------------------------
// Identity checks

struct VanishingIntegralEntry {
    int k = 0;
    /// ∫_0^{2π} sin^{2p+1}(x) sin(kx) dx from the exact backend.
    double exact = 0.0;
    bool exact_zero = false;
    /// The same integral from the direct and pseudo-spectral products.
    double direct = 0.0;
    double pseudo_spectral = 0.0;
};

struct VanishingIntegralReport {
    int p = 0;
    int k_max = 0;
    std::vector<VanishingIntegralEntry> entries;
    /// Exact zeros for every k > 2p+1, floating values there within 1e-13,
    /// nonzero exact values for odd k <= 2p+1.
    bool passed = false;
    double max_float_above = 0.0;
};

VanishingIntegralReport check_vanishing_integral(int p, int k_max);

struct VanishProjectionReport {
    int p = 0;
    int K = 0;
    /// Π_{k>K} Π_V sin^{2p+1}(t) sin^{2p+1}(x) is identically zero (exact backend).
    bool exact_zero = false;
    /// Largest surviving coefficient from the direct and pseudo-spectral products.
    double direct_max = 0.0;
    double pseudo_spectral_max = 0.0;
    /// exact_zero and both floating maxima <= 1e-14.
    bool vanishes = false;
};

VanishProjectionReport check_vanish_projection(int p, int K);

// ---------------------------------------------------------------------------
// Solution checks

/// ‖L_{ω,α} u - ω^{2p+1} (∂_t u)^{2p+1}‖_{X^{s-3}} / ρ (the raw norm when ρ = 0).
double pde_residual(const SpectralField& u, double rho, double omega, double alpha, const ModelParams& params);

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares line through (log x, log y).
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct SolutionFormReport {
    /// The (±1,1) part of u is exactly ρ cos t sin x.
    bool kernel_exact = false;
    double v_norm = 0.0;
    double ball_radius = 0.0;
    bool within_ball = false;
    /// ρ below which ‖v‖ <= ρ^{2p+1/2} would hold if ‖v‖ / ρ^{2p+1} stayed at
    /// its measured value.
    double ball_crossover_rho = 0.0;
};

SolutionFormReport check_solution_form(const BranchPoint& point, const ModelParams& params);

/// Exponent of ‖v‖ against ρ across converged points.
LogLogFit fit_v_exponent(const std::vector<BranchPoint>& points);

struct SmoothnessReport {
    double s = 0.0;
    double norm = 0.0;
    bool finite_norm = true;
    /// Largest |c_{n,k}| with |n| > 9 or k > 9, relative to the largest |c|.
    double tail_relative = 0.0;
    /// log max|c| over shells |n| + k = r, fitted as a + b r (geometric) and
    /// a + b log r (algebraic); geometric wins when it has the smaller error.
    double geometric_rate = 0.0;
    double geometric_sse = 0.0;
    double algebraic_sse = 0.0;
    int shells = 0;
    bool geometric = true;
    bool passed = true;
};

SmoothnessReport check_smoothness(const SpectralField& u, int k0);

// ---------------------------------------------------------------------------
// Suite

enum class CheckStatus { Pass, Warn, Fail };

std::string_view to_string(CheckStatus status) noexcept;

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    std::string detail;
};

struct SuiteOptions {
    bool quick = false;
    std::uint64_t seed = 2024;
};

/// Identity checks, kernel scan, algebra inequality, inverse round trip,
/// ∂_α L⁻¹ against finite differences, contraction estimates and (unless
/// quick) a full solve, all for the given model.
std::vector<CheckResult> run_verification_suite(const ModelParams& params, const SuiteOptions& options = {});

}  // namespace wavebif

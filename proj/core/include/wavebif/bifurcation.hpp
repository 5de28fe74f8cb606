#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wavebif/params.hpp"
#include "wavebif/range_solver.hpp"
#include "wavebif/spectral_field.hpp"

namespace wavebif {

/// θ(p) = ∫_{T²} sin^{2p+2}(t) sin^{2p+2}(x) = (binom(2p+1, p) π / 4^p)².
double theta_constant(int p);

/// The same integral by the trapezoid rule with `points` nodes per direction
/// (exact for points > 2p+2).
double theta_quadrature(int p, int points);

/// Leading-order damping ω^{2p} θ ρ^{2p} / π².
double leading_alpha(double rho, double omega, const ModelParams& params);

/// Lower edge of the admissible damping range: W0^{2p} θ ρ^{2p} / (4π²).
double alpha_floor(double rho, const ModelParams& params);

/// Σ_{j=1}^{2p+1} binom(2p+1, j) (-ρ sin t sin x)^{2p+1-j} (∂_t v)^j, the part
/// of (∂_t(ρ cos t sin x + v))^{2p+1} that involves v.
SpectralField compute_F(double rho, const SpectralField& v, const ModelParams& params);

/// ∫_{T²} g sin t sin x and ∫_{T²} g cos t sin x, read off the (±1, 1)
/// coefficients.
struct KernelPairings {
    double a_sin = 0.0;
    double a_cos = 0.0;
};

KernelPairings kernel_pairings(const SpectralField& g);

/// Right-hand side of the damping equation for a given v:
/// ω^{2p} (θ ρ^{2p} - ⟨F, sin t sin x⟩ / ρ) / π².
double rhs_alpha(double rho, double omega, const SpectralField& v, const ModelParams& params);

/// Right-hand side of the frequency equation for a given v:
/// m + 1 - ω^{2p+1} ⟨F, cos t sin x⟩ / (π² ρ).
double rhs_frequency(double rho, double omega, const SpectralField& v, const ModelParams& params);

struct BEvaluation {
    double value = 0.0;
    bool below_floor = false;
    RangeSolveReport range;
};

/// B(α): solves the range equation at (ρ, ω, α), warm-started from v0, and
/// returns rhs_alpha. Below the floor throws DomainViolation, or flags the
/// result when floor_policy is Warn.
BEvaluation eval_B(double alpha, double rho, double omega, const ModelParams& params,
                   const std::optional<SpectralField>& v0 = std::nullopt);

struct AlphaSolve {
    double alpha = 0.0;
    /// |α - B(α)| at the returned α.
    double residual = 0.0;
    int iterations = 0;
    int range_iterations = 0;
    /// Largest ratio of consecutive α steps (measured |∂_α B|).
    double contraction = 0.0;
    bool below_floor = false;
    RangeSolveReport range;
};

/// Fixed point of B by Picard iteration from alpha0.
AlphaSolve solve_alpha(double rho, double omega, const ModelParams& params, double alpha0,
                       const std::optional<SpectralField>& v0 = std::nullopt);

struct GEvaluation {
    double value = 0.0;
    AlphaSolve alpha;
};

/// G(ξ) with α and v resolved at ω = √ξ. The warm start is updated with the
/// resolved (α, v).
struct WarmStart {
    double alpha = 0.0;
    double omega = 0.0;
    std::optional<SpectralField> v;
};

GEvaluation eval_G(double xi, double rho, const ModelParams& params, WarmStart& warm);

struct BranchPoint {
    double rho = 0.0;
    double alpha = 0.0;
    double omega = 0.0;
    double v_norm = 0.0;
    /// Scale-relative residuals: damping equation / ρ^{2p}, frequency
    /// equation / ρ^{2p+1}, range equation / ρ^{2p+1}, full PDE in X^{s-3} / ρ.
    double resid_be1 = 0.0;
    double resid_be2 = 0.0;
    double resid_range = 0.0;
    double resid_pde = 0.0;
    int iterations_outer = 0;
    int range_iterations = 0;
    double contraction_factor = 0.0;
    bool below_floor = false;
    /// Sign changes of G(ξ) - ξ found by the bisection fallback (empty when
    /// Picard converged).
    std::vector<double> g_roots;
    SpectralField v;

    /// α π² / (ω^{2p} θ ρ^{2p}): tends to 1 as ρ → 0.
    [[nodiscard]] double alpha_ratio(const ModelParams& params) const;
    [[nodiscard]] SpectralField u(const ModelParams& params) const;
};

/// Solves both scalar equations coupled to the range equation at amplitude ρ.
/// Throws InvalidParams for ρ <= 0, ContractionFailure for ρ >= rho_max or a
/// failing inner iteration, BracketLost when no root of G(ξ) - ξ is found in
/// [W0², W1²], MaxIterExceeded.
BranchPoint solve_point(double rho, const ModelParams& params, const std::optional<WarmStart>& warm = std::nullopt);

struct BranchRow {
    double rho = 0.0;
    std::optional<BranchPoint> point;
    /// "converged" or the error name.
    std::string status;
    std::string message;
};

/// Solves every grid value in order, warm-starting each point from the last
/// converged one when `warm_start` is set. Failures are recorded per row.
std::vector<BranchRow> trace_branch(const std::vector<double>& rho_grid, const ModelParams& params,
                                    bool warm_start = true);

/// n log-spaced values from hi down to lo.
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace wavebif

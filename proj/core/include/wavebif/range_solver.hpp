#pragma once

#include <cstdint>
#include <optional>

#include "wavebif/params.hpp"
#include "wavebif/spectral_field.hpp"

namespace wavebif {

/// ω^{2p+1} (∂_t u)^{2p+1}, truncated to the model truncation.
SpectralField nonlinearity(const SpectralField& u, double omega, const ModelParams& params);

/// ρ cos(t) sin(x) + v.
SpectralField assemble_u(double rho, const SpectralField& v, const ModelParams& params);

/// The range map v ↦ L⁻¹ Π_V [ω^{2p+1} (∂_t(ρ cos t sin x + v))^{2p+1}].
/// `v` must lie in V.
SpectralField apply_A(const SpectralField& v, double rho, double omega, double alpha, const ModelParams& params);

/// ρ^{2p+1/2}.
double ball_radius(double rho, int p);

struct RangeSolveReport {
    SpectralField v;
    int iterations = 0;
    /// ‖v - A(v)‖_{X^s} of the returned v.
    double residual = 0.0;
    /// Largest ratio of consecutive Picard steps above the rounding floor.
    double contraction_factor = 0.0;
    /// Every iterate stayed in ‖v‖_{X^s} <= ρ^{2p+1/2}.
    bool in_ball = true;
    double v_norm = 0.0;
    double ball_radius = 0.0;
};

/// Picard iteration v_{j+1} = A(v_j) from v0 (zero by default).
///
/// Converged once ‖Δv‖ <= tol_range·max(ρ^{2p+1}, ‖v‖); iteration then
/// continues until ‖Δv‖ <= tol_range·ρ^{2p+1} or the steps stop shrinking.
/// Throws ContractionFailure when three consecutive step ratios exceed 0.95
/// (or, with enforce_ball, when an iterate leaves the ball) and
/// MaxIterExceeded after max_iter steps.
RangeSolveReport solve_range(double rho, double omega, double alpha, const ModelParams& params,
                             const std::optional<SpectralField>& v0 = std::nullopt);

/// max ‖A(v) - A(w)‖ / ‖v - w‖ over `samples` random pairs in the ball.
double estimate_lipschitz(double rho, double omega, double alpha, const ModelParams& params, int samples,
                          std::uint64_t seed = 7);

}  // namespace wavebif

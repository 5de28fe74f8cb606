#pragma once

#include <string>
#include <string_view>

#include "wavebif/spectral_field.hpp"

namespace wavebif {

/// The mass m with the token it was given as ("sqrt2", "e-2", "pi-3" or a
/// decimal literal). Irrationality is a modelling assumption; the token is
/// carried along so outputs say which value was meant.
struct Mass {
    double value = 0.0;
    std::string token;
};

/// Throws InvalidParams for unknown tokens and non-positive values.
Mass parse_mass(std::string_view token);

enum class FloorPolicy { Fail, Warn };

/// δ = min(0.05, (1+m)/100): the frequency window is W0² = 1+m-δ, W1² = 1+m+δ.
double default_window_delta(double m);

struct ModelParams {
    int p = 1;
    double m = 0.0;
    std::string m_token;
    int k0 = 2;
    double s = 12.0;
    double W0 = 0.0;
    double W1 = 0.0;
    Truncation trunc = kDefaultTruncation;
    double tol_range = 1e-10;
    double tol_bif = 1e-8;
    int max_iter = 200;
    /// Largest amplitude the solver accepts (empirical contraction threshold).
    double rho_max = 0.05;
    /// Permit s outside [k0+10, k0+20].
    bool allow_s_override = false;
    /// Fail range solves whose iterates leave the ball ‖v‖_{X^s} <= ρ^{2p+1/2}.
    bool enforce_ball = false;
    FloorPolicy floor_policy = FloorPolicy::Fail;
    ProductOptions product;

    /// Defaults for (p, m): s = k0 + 10 and the window from default_window_delta.
    static ModelParams make(int p, const Mass& mass, int k0 = 2);

    [[nodiscard]] double omega1() const;
    [[nodiscard]] int exponent() const noexcept { return 2 * p + 1; }

    /// Throws InvalidParams naming the first violated constraint.
    void validate() const;
};

}  // namespace wavebif

#pragma once

#include <vector>

#include "wavebif/params.hpp"
#include "wavebif/spectral_field.hpp"

namespace wavebif {

/// Fourier symbol of L_{ω,α} = ω²∂_t² - ∂_x² - ωα∂_t∂_x² + m at (n, k):
/// k² + m - ω²n² + iωαnk². The parts are kept for bound diagnostics.
struct Divisor {
    Complex value;
    int n = 0;
    int k = 1;
    double real_part = 0.0;  // k² + m - ω²n²
    double imag_part = 0.0;  // ωαnk²

    /// (k² - ω²n² + m)² + ω²α²n²k⁴, from the parts.
    [[nodiscard]] double modulus_sq() const noexcept { return real_part * real_part + imag_part * imag_part; }
};

Divisor divisor(int n, int k, double m, double omega, double alpha);
Divisor divisor(int n, int k, const ModelParams& params, double omega, double alpha);

/// Multiplies each mode by its divisor.
SpectralField apply_L(const SpectralField& f, const ModelParams& params, double omega, double alpha);

/// Divides each mode by its divisor. `f` must lie in V (no (±1,1) content):
/// throws KernelModePresent otherwise, and SingularDivisor if some |ϑ| on the
/// support is below 1e-300. Near-resonant modes are divided through as is.
SpectralField apply_L_inverse(const SpectralField& f, const ModelParams& params, double omega, double alpha);

/// ∂_α L⁻¹: multiplies each mode by -iωnk²/ϑ². Same preconditions as the
/// inverse.
SpectralField d_alpha_L_inverse(const SpectralField& f, const ModelParams& params, double omega, double alpha);

struct QRValues {
    double Q = 0.0;  // n² / (k² + m - ω²n²)²
    double R = 0.0;  // k² / (k² + m - ω²n²)²
};

/// Throws ResonantDenominator when |k² + m - ω²n²| <= 1e-12·(k² + m).
QRValues qr_values(int n, int k, const ModelParams& params, double omega);

struct InverseNormCertificate {
    double omega = 0.0;
    double alpha = 0.0;
    int K = 1;
    int scan = 1;

    // maxima of n²/|ϑ|² and k²/|ϑ|² over |n| <= scan, 1 <= k <= scan, (n,k) ≠ (±1,1)
    double max_n_ratio = 0.0;
    double max_k_ratio = 0.0;
    ModeIndex argmax_n;
    ModeIndex argmax_k;
    // same over k > K
    double band_max_n_ratio = 0.0;
    double band_max_k_ratio = 0.0;

    // n²/|ϑ|² <= 1/(ω²α²k⁴): the damping bound (infinite when α = 0)
    double n_bound = 0.0;
    double band_n_bound = 0.0;  // 1/(ω²α²K⁴)
    // k²/|ϑ|² <= max(4, 2(2+m)/(ω²α²K⁴)) when ω² < m + 2
    double band_k_bound = 0.0;

    // constants of the shapes C/α² (full) and C/(K⁴α²) + 4 (band), with
    // α ~ ρ^{2p} standing in for the amplitude
    double fitted_C_full = 0.0;
    double fitted_C_band = 0.0;

    bool respects_n_bound = false;
    bool respects_band_bounds = false;

    /// Non-kernel modes with |k² + m - ω²n²| < 1e-6 (resonances of L_{ω,0}).
    std::vector<ModeIndex> kernel_adjacent;
};

InverseNormCertificate inverse_norm_certificate(const ModelParams& params, double omega, double alpha, int K,
                                                int scan);

/// Zeros of k² + m - ω²n² over |n| <= scan, 1 <= k <= scan.
struct KernelScanReport {
    double m = 0.0;
    double omega = 0.0;
    int scan = 0;
    /// Modes with |k² + m - ω²n²| <= 1e-12·(k² + m).
    std::vector<ModeIndex> zeros;
    /// Smallest |k² + m - ω²n²| away from (±1,1) and its location.
    double min_elsewhere = 0.0;
    ModeIndex argmin;
    /// Modes other than (±1,1) counted as zeros.
    [[nodiscard]] std::vector<ModeIndex> extra_zeros() const;
};

KernelScanReport kernel_scan(double m, double omega, int scan);

}  // namespace wavebif

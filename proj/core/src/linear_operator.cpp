#include "wavebif/linear_operator.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "wavebif/error.hpp"

namespace wavebif {

namespace {

constexpr double kSingularThreshold = 1e-300;
constexpr double kResonanceRelTol = 1e-12;

bool is_kernel(int n, int k) { return k == 1 && (n == 1 || n == -1); }

double resonance(int n, int k, double m, double omega) {
    const double kk = static_cast<double>(k) * k;
    const double nn = static_cast<double>(n) * n;
    return kk + m - omega * omega * nn;
}

void require_in_V(const SpectralField& f) {
    if (f.coeff(1, 1) != Complex{} || f.coeff(-1, 1) != Complex{}) {
        throw Error(ErrorCode::KernelModePresent, "L^{-1} is only defined on V; (±1,1) carries amplitude");
    }
}

template <typename F>
SpectralField divide_through(const SpectralField& f, const ModelParams& params, double omega, double alpha,
                             F&& multiplier) {
    require_in_V(f);
    return f.map_modes([&](int n, int k) {
        const Divisor d = divisor(n, k, params, omega, alpha);
        if (std::abs(d.value) < kSingularThreshold) {
            throw Error(ErrorCode::SingularDivisor,
                        "divisor vanishes at (" + std::to_string(n) + "," + std::to_string(k) + ")");
        }
        return multiplier(n, k, d.value);
    });
}

}  // namespace

Divisor divisor(int n, int k, double m, double omega, double alpha) {
    Divisor d;
    d.n = n;
    d.k = k;
    d.real_part = resonance(n, k, m, omega);
    d.imag_part = omega * alpha * n * static_cast<double>(k) * k;
    d.value = Complex(d.real_part, d.imag_part);
    return d;
}

Divisor divisor(int n, int k, const ModelParams& params, double omega, double alpha) {
    return divisor(n, k, params.m, omega, alpha);
}

SpectralField apply_L(const SpectralField& f, const ModelParams& params, double omega, double alpha) {
    return f.map_modes([&](int n, int k) { return divisor(n, k, params, omega, alpha).value; });
}

SpectralField apply_L_inverse(const SpectralField& f, const ModelParams& params, double omega, double alpha) {
    return divide_through(f, params, omega, alpha, [](int, int, Complex d) { return 1.0 / d; });
}

SpectralField d_alpha_L_inverse(const SpectralField& f, const ModelParams& params, double omega, double alpha) {
    return divide_through(f, params, omega, alpha, [omega](int n, int k, Complex d) {
        const Complex num(0.0, -omega * n * static_cast<double>(k) * k);
        return num / (d * d);
    });
}

QRValues qr_values(int n, int k, const ModelParams& params, double omega) {
    if (k < 1) throw Error(ErrorCode::NonPositiveK, "k must be >= 1");
    const double den = resonance(n, k, params.m, omega);
    if (std::abs(den) <= kResonanceRelTol * (static_cast<double>(k) * k + params.m)) {
        throw Error(ErrorCode::ResonantDenominator,
                    "k^2 + m - omega^2 n^2 vanishes at (" + std::to_string(n) + "," + std::to_string(k) + ")");
    }
    const double den2 = den * den;
    return {static_cast<double>(n) * n / den2, static_cast<double>(k) * k / den2};
}

InverseNormCertificate inverse_norm_certificate(const ModelParams& params, double omega, double alpha, int K,
                                                int scan) {
    if (scan < K) throw Error(ErrorCode::InvalidParams, "scan range must be >= K");
    InverseNormCertificate c;
    c.omega = omega;
    c.alpha = alpha;
    c.K = K;
    c.scan = scan;
    for (int n = -scan; n <= scan; ++n) {
        for (int k = 1; k <= scan; ++k) {
            if (is_kernel(n, k)) continue;
            const Divisor d = divisor(n, k, params, omega, alpha);
            const double mod2 = d.modulus_sq();
            const double rn = static_cast<double>(n) * n / mod2;
            const double rk = static_cast<double>(k) * k / mod2;
            if (rn > c.max_n_ratio) {
                c.max_n_ratio = rn;
                c.argmax_n = {n, k};
            }
            if (rk > c.max_k_ratio) {
                c.max_k_ratio = rk;
                c.argmax_k = {n, k};
            }
            if (k > K) {
                c.band_max_n_ratio = std::max(c.band_max_n_ratio, rn);
                c.band_max_k_ratio = std::max(c.band_max_k_ratio, rk);
            }
            if (std::abs(d.real_part) < 1e-6) c.kernel_adjacent.push_back({n, k});
        }
    }
    const double inf = std::numeric_limits<double>::infinity();
    const double damp = omega * omega * alpha * alpha;
    const double K4 = std::pow(static_cast<double>(K), 4);
    c.n_bound = damp > 0.0 ? 1.0 / damp : inf;
    c.band_n_bound = damp > 0.0 ? 1.0 / (damp * K4) : inf;
    c.band_k_bound = damp > 0.0 ? std::max(4.0, 2.0 * (2.0 + params.m) / (damp * K4)) : inf;
    c.fitted_C_full = std::max(c.max_n_ratio, c.max_k_ratio) * alpha * alpha;
    c.fitted_C_band = std::max(0.0, std::max(c.band_max_n_ratio, c.band_max_k_ratio) - 4.0) * K4 * alpha * alpha;
    const double slack = 1.0 + 1e-12;
    c.respects_n_bound = c.max_n_ratio <= c.n_bound * slack;
    c.respects_band_bounds = c.band_max_n_ratio <= c.band_n_bound * slack &&
                             (omega * omega >= params.m + 2.0 || c.band_max_k_ratio <= c.band_k_bound * slack);
    return c;
}

std::vector<ModeIndex> KernelScanReport::extra_zeros() const {
    std::vector<ModeIndex> out;
    for (const ModeIndex& z : zeros) {
        if (!is_kernel(z.n, z.k)) out.push_back(z);
    }
    return out;
}

KernelScanReport kernel_scan(double m, double omega, int scan) {
    KernelScanReport r;
    r.m = m;
    r.omega = omega;
    r.scan = scan;
    r.min_elsewhere = std::numeric_limits<double>::infinity();
    for (int n = -scan; n <= scan; ++n) {
        for (int k = 1; k <= scan; ++k) {
            const double res = std::abs(resonance(n, k, m, omega));
            if (res <= kResonanceRelTol * (static_cast<double>(k) * k + m)) r.zeros.push_back({n, k});
            if (!is_kernel(n, k) && res < r.min_elsewhere) {
                r.min_elsewhere = res;
                r.argmin = {n, k};
            }
        }
    }
    return r;
}

}  // namespace wavebif

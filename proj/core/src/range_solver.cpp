#include "wavebif/range_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "wavebif/error.hpp"
#include "wavebif/linear_operator.hpp"
#include "wavebif/sampling.hpp"

namespace wavebif {

namespace {

constexpr double kRatioLimit = 0.95;
constexpr int kRatioStrikes = 3;
// steps below this multiple of ε·‖v‖ are rounding noise
constexpr double kNoiseFactor = 1e3;

ProductOptions model_product(const ModelParams& params) {
    ProductOptions opts = params.product;
    opts.output = params.trunc;
    return opts;
}

}  // namespace

SpectralField nonlinearity(const SpectralField& u, double omega, const ModelParams& params) {
    const int q = params.exponent();
    const SpectralField ut = d_t(u.with_truncation(params.trunc));
    return std::pow(omega, q) * odd_power(ut, q, model_product(params));
}

SpectralField assemble_u(double rho, const SpectralField& v, const ModelParams& params) {
    return kernel_mode(rho, params.trunc) + v.with_truncation(params.trunc);
}

SpectralField apply_A(const SpectralField& v, double rho, double omega, double alpha, const ModelParams& params) {
    const SpectralField u = assemble_u(rho, v, params);
    return apply_L_inverse(project_V(nonlinearity(u, omega, params)), params, omega, alpha);
}

double ball_radius(double rho, int p) { return std::pow(rho, 2.0 * p + 0.5); }

RangeSolveReport solve_range(double rho, double omega, double alpha, const ModelParams& params,
                             const std::optional<SpectralField>& v0) {
    RangeSolveReport report;
    report.ball_radius = ball_radius(rho, params.p);
    const double scale = std::pow(rho, params.exponent());
    const double eps = std::numeric_limits<double>::epsilon();

    SpectralField v = v0 ? project_V(v0->with_truncation(params.trunc)) : SpectralField(params.trunc);
    if (v0 && project_kernel(*v0).max_abs() > 0.0) {
        throw Error(ErrorCode::KernelModePresent, "initial guess for the range equation has kernel content");
    }

    double prev_step = -1.0;
    int strikes = 0;
    bool converged = false;
    for (int it = 1;; ++it) {
        if (it > params.max_iter) {
            throw Error(ErrorCode::MaxIterExceeded,
                        "range iteration did not converge in " + std::to_string(params.max_iter) + " steps");
        }
        SpectralField next = apply_A(v, rho, omega, alpha, params);
        const double step = xs_norm(next - v, params.s);
        const double v_norm = xs_norm(v, params.s);
        const double next_norm = xs_norm(next, params.s);
        v = std::move(next);
        report.iterations = it;

        if (next_norm > report.ball_radius) {
            report.in_ball = false;
            if (params.enforce_ball) {
                throw Error(ErrorCode::ContractionFailure,
                            "range iterate left the ball ‖v‖ <= rho^(2p+1/2) at step " + std::to_string(it));
            }
        }

        const double noise = kNoiseFactor * eps * std::max(next_norm, scale);
        if (prev_step > noise && step > noise) {
            const double ratio = step / prev_step;
            report.contraction_factor = std::max(report.contraction_factor, ratio);
            strikes = ratio > kRatioLimit ? strikes + 1 : 0;
            if (strikes >= kRatioStrikes) {
                throw Error(ErrorCode::ContractionFailure,
                            "range map is not contracting (step ratio " + std::to_string(ratio) + ")");
            }
        }

        if (!converged && step <= params.tol_range * std::max(scale, v_norm)) converged = true;
        if (converged) {
            const bool tight = step <= params.tol_range * scale;
            const bool stalled = prev_step >= 0.0 && step > 0.5 * prev_step;
            if (tight || stalled || step == 0.0) break;
        }
        prev_step = step;
    }

    report.v = v;
    report.v_norm = xs_norm(v, params.s);
    report.residual = xs_norm(v - apply_A(v, rho, omega, alpha, params), params.s);
    return report;
}

double estimate_lipschitz(double rho, double omega, double alpha, const ModelParams& params, int samples,
                          std::uint64_t seed) {
    if (samples < 2) throw Error(ErrorCode::InvalidParams, "estimate_lipschitz needs at least 2 samples");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> radius(0.0, 1.0);
    const double R = ball_radius(rho, params.p);
    SampleSpec spec;
    spec.trunc = params.trunc;
    double best = 0.0;
    for (int i = 0; i < samples; ++i) {
        const SpectralField v = random_field_with_norm(rng, spec, params.s, R * radius(rng));
        const SpectralField w = random_field_with_norm(rng, spec, params.s, R * radius(rng));
        const double gap = xs_norm(v - w, params.s);
        if (gap == 0.0) continue;
        const SpectralField diff =
            apply_A(v, rho, omega, alpha, params) - apply_A(w, rho, omega, alpha, params);
        best = std::max(best, xs_norm(diff, params.s) / gap);
    }
    return best;
}

}  // namespace wavebif

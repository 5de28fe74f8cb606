#include "wavebif/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wavebif/error.hpp"
#include "wavebif/verification.hpp"

namespace wavebif {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;
constexpr double kRatioLimit = 0.95;
constexpr int kRatioStrikes = 3;
// scalar iterations keep going this far below the requested tolerance
constexpr double kTightening = 1e-3;
constexpr int kScanPoints = 16;

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

// (-ρ sin t sin x) as a one-term field
SpectralField kernel_sine(double rho, Truncation trunc) {
    return make_field(real_mode(1, 1, 0.0, -rho), trunc);
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

struct ScalarTracker {
    double prev = -1.0;
    int strikes = 0;
    double max_ratio = 0.0;

    void observe(double step, double noise, const char* what) {
        if (prev > noise && step > noise) {
            const double ratio = step / prev;
            max_ratio = std::max(max_ratio, ratio);
            strikes = ratio > kRatioLimit ? strikes + 1 : 0;
            if (strikes >= kRatioStrikes) {
                throw Error(ErrorCode::ContractionFailure,
                            std::string(what) + " iteration is not contracting (ratio " + fmt(ratio) + ")");
            }
        }
    }
};

}  // namespace

double theta_constant(int p) {
    if (p < 1) throw Error(ErrorCode::InvalidParams, "p must be >= 1");
    const double c = binomial(2 * p + 1, p) * std::numbers::pi / std::pow(4.0, p);
    return c * c;
}

double theta_quadrature(int p, int points) {
    const double h = 2.0 * std::numbers::pi / points;
    double sum = 0.0;
    for (int i = 0; i < points; ++i) sum += std::pow(std::sin(i * h), 2 * p + 2);
    const double one_d = h * sum;
    return one_d * one_d;
}

double leading_alpha(double rho, double omega, const ModelParams& params) {
    const int p = params.p;
    return std::pow(omega, 2 * p) * theta_constant(p) * std::pow(rho, 2 * p) / kPi2;
}

double alpha_floor(double rho, const ModelParams& params) {
    const int p = params.p;
    return std::pow(params.W0, 2 * p) * theta_constant(p) * std::pow(rho, 2 * p) / (4.0 * kPi2);
}

SpectralField compute_F(double rho, const SpectralField& v, const ModelParams& params) {
    const int q = params.exponent();
    const Truncation tr = params.trunc;
    ProductOptions opts = params.product;
    opts.output = Truncation{tr.t + q, tr.x + q};

    const TrigField a = kernel_sine(rho, tr).as_trig();
    const TrigField w = d_t(v.with_truncation(tr)).as_trig();

    // a^i for i = 0..q-1 and w^j for j = 1..q
    std::vector<TrigField> a_pow{TrigField::constant(1.0, tr)};
    for (int i = 1; i < q; ++i) a_pow.push_back(multiply(a_pow.back(), a, opts));
    std::vector<TrigField> w_pow{w};
    for (int j = 2; j <= q; ++j) w_pow.push_back(multiply(w_pow.back(), w, opts));

    SpectralField F(tr);
    for (int j = 1; j <= q; ++j) {
        TrigField term = multiply(a_pow[q - j], w_pow[j - 1], opts);
        F = F + binomial(q, j) * SpectralField::from_trig(term.with_truncation(tr));
    }
    return F;
}

KernelPairings kernel_pairings(const SpectralField& g) {
    const Complex c = g.coeff(1, 1);
    return {-2.0 * kPi2 * c.imag(), 2.0 * kPi2 * c.real()};
}

double rhs_alpha(double rho, double omega, const SpectralField& v, const ModelParams& params) {
    const int p = params.p;
    const double pairing = kernel_pairings(compute_F(rho, v, params)).a_sin;
    return std::pow(omega, 2 * p) * (theta_constant(p) * std::pow(rho, 2 * p) - pairing / rho) / kPi2;
}

double rhs_frequency(double rho, double omega, const SpectralField& v, const ModelParams& params) {
    const double pairing = kernel_pairings(compute_F(rho, v, params)).a_cos;
    return params.m + 1.0 - std::pow(omega, params.exponent()) * pairing / (kPi2 * rho);
}

BEvaluation eval_B(double alpha, double rho, double omega, const ModelParams& params,
                   const std::optional<SpectralField>& v0) {
    BEvaluation out;
    const double floor = alpha_floor(rho, params);
    if (alpha < floor) {
        if (params.floor_policy == FloorPolicy::Fail) {
            throw Error(ErrorCode::DomainViolation,
                        "alpha = " + fmt(alpha) + " is below the admissible floor " + fmt(floor));
        }
        out.below_floor = true;
    }
    out.range = solve_range(rho, omega, alpha, params, v0);
    out.value = rhs_alpha(rho, omega, out.range.v, params);
    return out;
}

AlphaSolve solve_alpha(double rho, double omega, const ModelParams& params, double alpha0,
                       const std::optional<SpectralField>& v0) {
    const double scale = std::pow(rho, 2 * params.p);
    const double target = params.tol_bif * scale;
    AlphaSolve out;
    ScalarTracker tracker;
    double alpha = alpha0;
    std::optional<SpectralField> warm = v0;
    for (int it = 1; it <= params.max_iter; ++it) {
        BEvaluation b = eval_B(alpha, rho, omega, params, warm);
        const double step = std::abs(b.value - alpha);
        out.iterations = it;
        out.range_iterations += b.range.iterations;
        out.below_floor = out.below_floor || b.below_floor;
        tracker.observe(step, 1e3 * std::numeric_limits<double>::epsilon() * alpha, "damping");
        out.contraction = tracker.max_ratio;

        const bool tight = step <= kTightening * target;
        const bool stalled = step <= target && tracker.prev >= 0.0 && step > 0.5 * tracker.prev;
        if (tight || stalled || step == 0.0) {
            out.alpha = alpha;
            out.residual = step;
            out.range = std::move(b.range);
            return out;
        }
        tracker.prev = step;
        warm = b.range.v;
        alpha = b.value;
    }
    throw Error(ErrorCode::MaxIterExceeded, "damping equation did not converge");
}

GEvaluation eval_G(double xi, double rho, const ModelParams& params, WarmStart& warm) {
    const double omega = std::sqrt(xi);
    const double alpha0 = warm.alpha > 0.0 ? warm.alpha : leading_alpha(rho, omega, params);
    GEvaluation out;
    out.alpha = solve_alpha(rho, omega, params, alpha0, warm.v);
    out.value = rhs_frequency(rho, omega, out.alpha.range.v, params);
    warm.alpha = out.alpha.alpha;
    warm.omega = omega;
    warm.v = out.alpha.range.v;
    return out;
}

double BranchPoint::alpha_ratio(const ModelParams& params) const {
    return alpha / leading_alpha(rho, omega, params);
}

SpectralField BranchPoint::u(const ModelParams& params) const { return assemble_u(rho, v, params); }

namespace {

struct GRoot {
    double xi = 0.0;
    GEvaluation eval;
    int evaluations = 0;
    std::vector<double> roots;
};

// Picard on ξ ↦ G(ξ); nullopt when it leaves the window or stops contracting.
std::optional<GRoot> g_picard(double rho, const ModelParams& params, WarmStart& warm, double xi0) {
    const double lo = params.W0 * params.W0;
    const double hi = params.W1 * params.W1;
    const double target = params.tol_bif * std::pow(rho, params.exponent());
    GRoot out;
    double xi = xi0;
    double prev = -1.0;
    int strikes = 0;
    for (int it = 1; it <= params.max_iter; ++it) {
        GEvaluation g = eval_G(xi, rho, params, warm);
        out.evaluations = it;
        const double step = std::abs(g.value - xi);
        if (step <= kTightening * target || (step <= target && prev >= 0.0 && step > 0.5 * prev) || step == 0.0) {
            out.xi = xi;
            out.eval = std::move(g);
            return out;
        }
        if (prev >= 0.0 && step > kRatioLimit * prev && ++strikes >= kRatioStrikes) return std::nullopt;
        prev = step;
        xi = g.value;
        if (xi < lo || xi > hi) return std::nullopt;
    }
    return std::nullopt;
}

GRoot g_bisection(double rho, const ModelParams& params, WarmStart& warm) {
    const double lo = params.W0 * params.W0;
    const double hi = params.W1 * params.W1;
    const double target = params.tol_bif * std::pow(rho, params.exponent());
    GRoot out;
    auto h = [&](double xi) {
        ++out.evaluations;
        return eval_G(xi, rho, params, warm).value - xi;
    };

    std::vector<double> xs(kScanPoints + 1);
    std::vector<double> hs(kScanPoints + 1);
    for (int i = 0; i <= kScanPoints; ++i) {
        xs[i] = lo + (hi - lo) * i / kScanPoints;
        hs[i] = h(xs[i]);
    }
    std::vector<std::pair<double, double>> brackets;
    for (int i = 0; i < kScanPoints; ++i) {
        if (hs[i] == 0.0) out.roots.push_back(xs[i]);
        if (hs[i] * hs[i + 1] < 0.0) brackets.emplace_back(xs[i], xs[i + 1]);
    }
    if (hs[kScanPoints] == 0.0) out.roots.push_back(xs[kScanPoints]);
    for (auto [a, b] : brackets) out.roots.push_back(0.5 * (a + b));
    if (out.roots.empty()) {
        throw Error(ErrorCode::BracketLost, "G(xi) - xi has no sign change in [W0^2, W1^2]");
    }

    const double centre = params.m + 1.0;
    auto closer = [centre](double x, double y) { return std::abs(x - centre) < std::abs(y - centre); };
    double a = 0.0;
    double b = 0.0;
    double best = *std::min_element(out.roots.begin(), out.roots.end(), closer);
    bool exact = std::find(xs.begin(), xs.end(), best) != xs.end();
    if (!exact) {
        for (auto [x0, x1] : brackets) {
            if (0.5 * (x0 + x1) == best) {
                a = x0;
                b = x1;
            }
        }
        double ha = h(a);
        while (b - a > target) {
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            const double hm = h(mid);
            if (hm == 0.0) {
                a = b = mid;
                break;
            }
            if ((hm < 0.0) == (ha < 0.0)) {
                a = mid;
                ha = hm;
            } else {
                b = mid;
            }
        }
        best = 0.5 * (a + b);
    }
    out.xi = best;
    out.eval = eval_G(best, rho, params, warm);
    ++out.evaluations;
    return out;
}

}  // namespace

BranchPoint solve_point(double rho, const ModelParams& params, const std::optional<WarmStart>& warm_in) {
    if (!(rho > 0.0)) throw Error(ErrorCode::InvalidParams, "rho must be positive");
    if (rho >= params.rho_max) {
        throw Error(ErrorCode::ContractionFailure,
                    "rho = " + fmt(rho) + " is at or above the contraction threshold rho_max = " + fmt(params.rho_max));
    }
    params.validate();

    WarmStart warm = warm_in.value_or(WarmStart{});
    const double xi0 = warm.omega > 0.0 ? warm.omega * warm.omega : params.m + 1.0;
    if (warm.alpha <= 0.0) warm.alpha = leading_alpha(rho, std::sqrt(xi0), params);

    const WarmStart initial = warm;
    std::optional<GRoot> root = g_picard(rho, params, warm, xi0);
    if (!root) {
        warm = initial;
        root = g_bisection(rho, params, warm);
    }

    const double omega = std::sqrt(root->xi);
    if (omega < params.W0 || omega > params.W1) {
        throw Error(ErrorCode::BracketLost, "frequency left the window [W0, W1]");
    }
    const AlphaSolve& as = root->eval.alpha;

    BranchPoint bp;
    bp.rho = rho;
    bp.alpha = as.alpha;
    bp.omega = omega;
    bp.v = as.range.v;
    bp.v_norm = as.range.v_norm;
    bp.resid_be1 = as.residual / std::pow(rho, 2 * params.p);
    bp.resid_be2 = std::abs(root->eval.value - root->xi) / std::pow(rho, params.exponent());
    bp.resid_range = as.range.residual / std::pow(rho, params.exponent());
    bp.resid_pde = pde_residual(bp.u(params), rho, omega, bp.alpha, params);
    bp.iterations_outer = root->evaluations;
    bp.range_iterations = as.range_iterations;
    bp.contraction_factor = as.range.contraction_factor;
    bp.below_floor = as.below_floor;
    bp.g_roots = root->roots;
    return bp;
}

std::vector<BranchRow> trace_branch(const std::vector<double>& rho_grid, const ModelParams& params,
                                    bool warm_start) {
    std::vector<BranchRow> rows;
    std::optional<BranchPoint> last;
    for (double rho : rho_grid) {
        BranchRow row;
        row.rho = rho;
        std::optional<WarmStart> warm;
        if (warm_start && last) {
            const double r = rho / last->rho;
            warm = WarmStart{last->alpha * std::pow(r, 2 * params.p), last->omega,
                             std::pow(r, params.exponent()) * last->v};
        }
        try {
            row.point = solve_point(rho, params, warm);
            row.status = "converged";
            last = row.point;
        } catch (const Error& e) {
            row.status = std::string(to_string(e.code()));
            row.message = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (n < 1 || !(lo > 0.0) || !(hi >= lo)) throw Error(ErrorCode::InvalidParams, "bad log grid");
    if (n == 1) return {hi};
    std::vector<double> out;
    const double a = std::log10(hi);
    const double b = std::log10(lo);
    for (int i = 0; i < n; ++i) out.push_back(std::pow(10.0, a + (b - a) * i / (n - 1)));
    out.front() = hi;
    out.back() = lo;
    return out;
}

}  // namespace wavebif

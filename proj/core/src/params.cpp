#include "wavebif/params.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "wavebif/error.hpp"

namespace wavebif {

Mass parse_mass(std::string_view token) {
    if (token == "sqrt2") return {1.41421356237309504880, std::string(token)};
    if (token == "e-2") return {0.71828182845904523536, std::string(token)};
    if (token == "pi-3") return {0.14159265358979323846, std::string(token)};

    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw Error(ErrorCode::InvalidParams, "cannot parse mass '" + std::string(token) + "'");
    }
    if (!(value > 0.0)) throw Error(ErrorCode::InvalidParams, "mass must be positive");
    return {value, std::string(token)};
}

double default_window_delta(double m) { return std::min(0.05, (1.0 + m) * 1e-2); }

ModelParams ModelParams::make(int p, const Mass& mass, int k0) {
    ModelParams params;
    params.p = p;
    params.m = mass.value;
    params.m_token = mass.token;
    params.k0 = k0;
    params.s = k0 + 10.0;
    const double delta = default_window_delta(mass.value);
    params.W0 = std::sqrt(1.0 + mass.value - delta);
    params.W1 = std::sqrt(1.0 + mass.value + delta);
    return params;
}

double ModelParams::omega1() const { return std::sqrt(1.0 + m); }

void ModelParams::validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidParams, what); };
    if (p < 1) fail("p must be a positive integer");
    if (!(m > 0.0)) fail("m must be positive");
    if (k0 < 2) fail("k0 must be >= 2");
    if (!(W0 > 0.0 && W0 < W1)) fail("frequency window needs 0 < W0 < W1");
    if (!(W0 < omega1() && omega1() < W1)) fail("window must contain sqrt(1+m)");
    if (!(1.0 < W0 * W0 && W1 * W1 < m + 2.0)) fail("window must satisfy 1 < W0^2 <= W1^2 < m+2");
    if (!allow_s_override && (s < k0 + 10.0 || s > k0 + 20.0)) {
        fail("s must lie in [k0+10, k0+20] (pass the override flag to change it)");
    }
    if (s < 3.0) fail("s must be >= 3 (residuals are measured in X^{s-3})");
    if (trunc.t < exponent() || trunc.x < exponent()) fail("truncation must hold the modes up to 2p+1");
    if (!(tol_range > 0.0 && tol_bif > 0.0)) fail("tolerances must be positive");
    if (max_iter < 1) fail("max_iter must be positive");
    if (!(rho_max > 0.0)) fail("rho_max must be positive");
}

}  // namespace wavebif

#pragma once

#include <cstdint>
#include <map>
#include <utility>

namespace wavebif {

/// (re + i·im) / 2^exp with 64-bit numerators.
struct GaussianDyadic {
    std::int64_t re = 0;
    std::int64_t im = 0;
    int exp = 0;

    [[nodiscard]] bool is_zero() const noexcept { return re == 0 && im == 0; }
    [[nodiscard]] double real_value() const noexcept;
    [[nodiscard]] double imag_value() const noexcept;
};

/// Trigonometric polynomial Σ a_{n,j} e^{i(nt + jx)} with Gaussian dyadic
/// coefficients sharing one power-of-two denominator. Binomial expansions
/// of sin/cos powers stay inside this ring, so identities such as "this
/// coefficient vanishes" are decided exactly. Arithmetic overflow throws
/// TruncationOverflow.
class ExactTrigPoly {
public:
    static ExactTrigPoly one();
    static ExactTrigPoly sin_t(int freq);
    static ExactTrigPoly cos_t(int freq);
    static ExactTrigPoly sin_x(int freq);
    static ExactTrigPoly cos_x(int freq);

    ExactTrigPoly operator*(const ExactTrigPoly& other) const;
    ExactTrigPoly operator+(const ExactTrigPoly& other) const;
    [[nodiscard]] ExactTrigPoly pow(int q) const;
    [[nodiscard]] ExactTrigPoly scaled(std::int64_t factor) const;

    [[nodiscard]] GaussianDyadic coeff(int n, int j) const;

    /// Coefficient of e^{int} sin(kx), k >= 1: i (a_{n,k} - a_{n,-k}).
    [[nodiscard]] GaussianDyadic sine_coeff(int n, int k) const;

    /// True iff a_{n,-j} = -a_{n,j} for all terms (odd in x).
    [[nodiscard]] bool is_odd_in_x() const;

    /// Drops the kernel modes e^{±it} sin(x) (requires oddness in x).
    [[nodiscard]] ExactTrigPoly without_kernel() const;
    /// Keeps spatial frequencies |j| > K.
    [[nodiscard]] ExactTrigPoly above_band(int K) const;

    [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
    [[nodiscard]] const std::map<std::pair<int, int>, std::pair<std::int64_t, std::int64_t>>& terms() const noexcept {
        return terms_;
    }
    [[nodiscard]] int exponent() const noexcept { return exp_; }

private:
    using Terms = std::map<std::pair<int, int>, std::pair<std::int64_t, std::int64_t>>;

    static ExactTrigPoly basis(bool in_t, bool is_sin, int freq);
    void reduce();

    std::map<std::pair<int, int>, std::pair<std::int64_t, std::int64_t>> terms_;
    int exp_ = 0;
};

}  // namespace wavebif

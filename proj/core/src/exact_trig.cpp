#include "wavebif/exact_trig.hpp"

#include <cmath>
#include <cstdlib>

#include "wavebif/error.hpp"

namespace wavebif {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::TruncationOverflow, "exact coefficient overflow");
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::TruncationOverflow, "exact coefficient overflow");
    return r;
}

std::int64_t checked_shift(std::int64_t a, int bits) {
    for (int i = 0; i < bits; ++i) a = checked_mul(a, 2);
    return a;
}

}  // namespace

double GaussianDyadic::real_value() const noexcept { return std::ldexp(static_cast<double>(re), -exp); }
double GaussianDyadic::imag_value() const noexcept { return std::ldexp(static_cast<double>(im), -exp); }

ExactTrigPoly ExactTrigPoly::one() {
    ExactTrigPoly p;
    p.terms_[{0, 0}] = {1, 0};
    return p;
}

// sin(fz) = (-i e^{ifz} + i e^{-ifz}) / 2,  cos(fz) = (e^{ifz} + e^{-ifz}) / 2
ExactTrigPoly ExactTrigPoly::basis(bool in_t, bool is_sin, int freq) {
    if (freq == 0) return is_sin ? ExactTrigPoly{} : one();
    ExactTrigPoly p;
    p.exp_ = 1;
    const std::pair<int, int> plus = in_t ? std::pair{freq, 0} : std::pair{0, freq};
    const std::pair<int, int> minus = in_t ? std::pair{-freq, 0} : std::pair{0, -freq};
    if (is_sin) {
        p.terms_[plus] = {0, -1};
        p.terms_[minus] = {0, 1};
    } else {
        p.terms_[plus] = {1, 0};
        p.terms_[minus] = {1, 0};
    }
    return p;
}

ExactTrigPoly ExactTrigPoly::sin_t(int freq) { return basis(true, true, freq); }
ExactTrigPoly ExactTrigPoly::cos_t(int freq) { return basis(true, false, freq); }
ExactTrigPoly ExactTrigPoly::sin_x(int freq) { return basis(false, true, freq); }
ExactTrigPoly ExactTrigPoly::cos_x(int freq) { return basis(false, false, freq); }

ExactTrigPoly ExactTrigPoly::operator*(const ExactTrigPoly& other) const {
    ExactTrigPoly out;
    out.exp_ = exp_ + other.exp_;
    for (const auto& [ia, a] : terms_) {
        for (const auto& [ib, b] : other.terms_) {
            const std::pair<int, int> idx{ia.first + ib.first, ia.second + ib.second};
            const std::int64_t re = checked_add(checked_mul(a.first, b.first), -checked_mul(a.second, b.second));
            const std::int64_t im = checked_add(checked_mul(a.first, b.second), checked_mul(a.second, b.first));
            auto& slot = out.terms_[idx];
            slot.first = checked_add(slot.first, re);
            slot.second = checked_add(slot.second, im);
        }
    }
    out.reduce();
    return out;
}

ExactTrigPoly ExactTrigPoly::operator+(const ExactTrigPoly& other) const {
    ExactTrigPoly out;
    out.exp_ = std::max(exp_, other.exp_);
    for (const ExactTrigPoly* src : {this, &other}) {
        const int shift = out.exp_ - src->exp_;
        for (const auto& [idx, c] : src->terms_) {
            auto& slot = out.terms_[idx];
            slot.first = checked_add(slot.first, checked_shift(c.first, shift));
            slot.second = checked_add(slot.second, checked_shift(c.second, shift));
        }
    }
    out.reduce();
    return out;
}

ExactTrigPoly ExactTrigPoly::pow(int q) const {
    ExactTrigPoly out = one();
    for (int i = 0; i < q; ++i) out = out * *this;
    return out;
}

ExactTrigPoly ExactTrigPoly::scaled(std::int64_t factor) const {
    ExactTrigPoly out = *this;
    for (auto& [idx, c] : out.terms_) c = {checked_mul(c.first, factor), checked_mul(c.second, factor)};
    out.reduce();
    return out;
}

GaussianDyadic ExactTrigPoly::coeff(int n, int j) const {
    auto it = terms_.find({n, j});
    if (it == terms_.end()) return {0, 0, 0};
    return {it->second.first, it->second.second, exp_};
}

GaussianDyadic ExactTrigPoly::sine_coeff(int n, int k) const {
    const GaussianDyadic plus = coeff(n, k);
    const GaussianDyadic minus = coeff(n, -k);
    // i (a - b) = (-(a.im - b.im)) + i (a.re - b.re)
    GaussianDyadic r{checked_add(-plus.im, minus.im), checked_add(plus.re, -minus.re), exp_};
    if (r.is_zero()) r.exp = 0;
    return r;
}

bool ExactTrigPoly::is_odd_in_x() const {
    for (const auto& [idx, c] : terms_) {
        const GaussianDyadic mirror = coeff(idx.first, -idx.second);
        if (mirror.re != -c.first || mirror.im != -c.second) return false;
    }
    return true;
}

ExactTrigPoly ExactTrigPoly::without_kernel() const {
    if (!is_odd_in_x()) throw Error(ErrorCode::RealityViolation, "kernel projection needs an x-odd polynomial");
    ExactTrigPoly out = *this;
    for (int n : {-1, 1}) {
        for (int j : {-1, 1}) out.terms_.erase({n, j});
    }
    out.reduce();
    return out;
}

ExactTrigPoly ExactTrigPoly::above_band(int K) const {
    ExactTrigPoly out;
    out.exp_ = exp_;
    for (const auto& [idx, c] : terms_) {
        if (std::abs(idx.second) > K) out.terms_[idx] = c;
    }
    out.reduce();
    return out;
}

void ExactTrigPoly::reduce() {
    std::erase_if(terms_, [](const auto& kv) { return kv.second.first == 0 && kv.second.second == 0; });
    if (terms_.empty()) {
        exp_ = 0;
        return;
    }
    auto all_even = [this] {
        for (const auto& [idx, c] : terms_) {
            if ((c.first & 1) != 0 || (c.second & 1) != 0) return false;
        }
        return true;
    };
    while (exp_ > 0 && all_even()) {
        for (auto& [idx, c] : terms_) c = {c.first / 2, c.second / 2};
        --exp_;
    }
}

}  // namespace wavebif

#include "wavebif/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include "pseudo_spectral.hpp"
#include "wavebif/error.hpp"

namespace wavebif {

// ---------------------------------------------------------------------------
// TrigField

TrigField::TrigField(Parity parity, Truncation trunc)
    : parity_(parity),
      trunc_(trunc),
      data_(static_cast<std::size_t>(2 * trunc.t + 1) * static_cast<std::size_t>(trunc.x + 1)) {
    if (trunc.t < 0 || trunc.x < 1) {
        throw Error(ErrorCode::InvalidParams, "truncation must satisfy t >= 0, x >= 1");
    }
}

TrigField TrigField::constant(double value, Truncation trunc) {
    TrigField f(Parity::Cosine, trunc);
    f.at(0, 0) = value;
    return f;
}

Complex TrigField::coeff(int n, int k) const noexcept {
    return in_range(n, k) ? data_[index(n, k)] : Complex{};
}

Complex& TrigField::at(int n, int k) {
    if (!in_range(n, k)) {
        throw Error(ErrorCode::TruncationOverflow,
                    "mode (" + std::to_string(n) + "," + std::to_string(k) + ") outside truncation");
    }
    return data_[index(n, k)];
}

std::vector<SpectralEntry> TrigField::nonzeros() const {
    std::vector<SpectralEntry> out;
    for (int n = -trunc_.t; n <= trunc_.t; ++n) {
        for (int k = k_min(); k <= trunc_.x; ++k) {
            const Complex c = data_[index(n, k)];
            if (c != Complex{}) out.push_back({n, k, c});
        }
    }
    return out;
}

double TrigField::max_abs() const noexcept {
    double m = 0.0;
    for (const Complex& c : data_) m = std::max(m, std::abs(c));
    return m;
}

bool TrigField::is_zero() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& c) { return c == Complex{}; });
}

TrigField TrigField::with_truncation(Truncation trunc) const {
    TrigField out(parity_, trunc);
    const int nt = std::min(trunc.t, trunc_.t);
    const int nx = std::min(trunc.x, trunc_.x);
    for (int n = -nt; n <= nt; ++n) {
        for (int k = k_min(); k <= nx; ++k) out.data_[out.index(n, k)] = data_[index(n, k)];
    }
    return out;
}

void TrigField::prune(double relative) {
    if (relative <= 0.0) return;
    const double floor = relative * max_abs();
    for (Complex& c : data_) {
        if (std::abs(c) < floor) c = Complex{};
    }
}

void TrigField::enforce_reality() {
    for (int k = k_min(); k <= trunc_.x; ++k) {
        Complex& c0 = data_[index(0, k)];
        c0 = Complex(c0.real(), 0.0);
        for (int n = 1; n <= trunc_.t; ++n) data_[index(-n, k)] = std::conj(data_[index(n, k)]);
    }
}

// ---------------------------------------------------------------------------
// SpectralField

SpectralField::SpectralField(Truncation trunc) : data_(Parity::Sine, trunc) {}

SpectralField::SpectralField(TrigField data) : data_(std::move(data)) {}

SpectralField SpectralField::from_trig(TrigField field) {
    if (field.parity() != Parity::Sine) {
        throw Error(ErrorCode::RealityViolation, "field is not odd in x; it has no X^s representative");
    }
    field.enforce_reality();
    return SpectralField(std::move(field));
}

SpectralField SpectralField::with_truncation(Truncation trunc) const {
    return SpectralField(data_.with_truncation(trunc));
}

namespace {

Truncation max_truncation(Truncation a, Truncation b) {
    return {std::max(a.t, b.t), std::max(a.x, b.x)};
}

template <typename Op>
SpectralField combine(const SpectralField& a, const SpectralField& b, Op op) {
    const Truncation tr = max_truncation(a.truncation(), b.truncation());
    TrigField out(Parity::Sine, tr);
    for (int n = -tr.t; n <= tr.t; ++n) {
        for (int k = 1; k <= tr.x; ++k) out.at(n, k) = op(a.coeff(n, k), b.coeff(n, k));
    }
    return SpectralField::from_trig(std::move(out));
}

}  // namespace

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    return combine(a, b, [](Complex x, Complex y) { return x + y; });
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    return combine(a, b, [](Complex x, Complex y) { return x - y; });
}

SpectralField operator*(double scale, const SpectralField& f) {
    return f.map_modes([scale](int, int) { return Complex(scale, 0.0); });
}

// ---------------------------------------------------------------------------
// Construction helpers

SpectralField make_field(std::span<const FieldEntry> entries, Truncation trunc) {
    std::map<ModeIndex, Complex> given;
    auto close = [](Complex a, Complex b) {
        const double scale = std::max(std::abs(a), std::abs(b));
        return std::abs(a - b) <= 4.0 * std::numeric_limits<double>::epsilon() * scale;
    };
    for (const auto& [idx, c] : entries) {
        if (idx.k < 1) {
            throw Error(ErrorCode::NonPositiveK, "spatial index k must be >= 1, got " + std::to_string(idx.k));
        }
        if (std::abs(idx.n) > trunc.t || idx.k > trunc.x) {
            throw Error(ErrorCode::TruncationOverflow, "entry (" + std::to_string(idx.n) + "," +
                                                           std::to_string(idx.k) + ") outside truncation");
        }
        if (auto it = given.find(idx); it != given.end() && !close(it->second, c)) {
            throw Error(ErrorCode::RealityViolation, "conflicting amplitudes supplied for one mode");
        }
        given[idx] = c;
    }

    TrigField data(Parity::Sine, trunc);
    for (const auto& [idx, c] : given) {
        const ModeIndex partner{-idx.n, idx.k};
        if (auto it = given.find(partner); it != given.end() && !close(it->second, std::conj(c))) {
            throw Error(ErrorCode::RealityViolation,
                        "amplitudes at (n,k) and (-n,k) are not complex conjugates");
        }
        data.at(idx.n, idx.k) = c;
        if (given.find(partner) == given.end()) data.at(partner.n, partner.k) = std::conj(c);
    }
    // Reality is re-imposed from the n >= 0 half.
    return SpectralField::from_trig(std::move(data));
}

SpectralField make_field(std::initializer_list<FieldEntry> entries, Truncation trunc) {
    return make_field(std::span<const FieldEntry>(entries.begin(), entries.size()), trunc);
}

std::vector<FieldEntry> real_mode(int n, int k, double cos_coeff, double sin_coeff) {
    if (n < 0) throw Error(ErrorCode::InvalidParams, "real_mode expects n >= 0");
    if (n == 0) return {{ModeIndex{0, k}, Complex(cos_coeff, 0.0)}};
    const Complex c(cos_coeff / 2.0, -sin_coeff / 2.0);
    return {{ModeIndex{n, k}, c}, {ModeIndex{-n, k}, std::conj(c)}};
}

SpectralField kernel_mode(double rho, Truncation trunc) {
    const auto entries = real_mode(1, 1, rho, 0.0);
    return make_field(entries, trunc);
}

// ---------------------------------------------------------------------------
// Evaluation and norms

double evaluate(const TrigField& f, double t, double x) {
    Complex sum{};
    double mass = 0.0;
    for (const auto& e : f.nonzeros()) {
        const double phi = f.parity() == Parity::Sine ? std::sin(e.k * x) : std::cos(e.k * x);
        sum += e.c * std::polar(1.0, e.n * t) * phi;
        mass += std::abs(e.c);
    }
    if (std::abs(sum.imag()) > 1e-12 * std::max(mass, std::numeric_limits<double>::min())) {
        throw Error(ErrorCode::RealityViolation, "field does not evaluate to a real value");
    }
    return sum.real();
}

double evaluate(const SpectralField& f, double t, double x) { return evaluate(f.as_trig(), t, x); }

double xs_norm(const TrigField& f, double s) {
    const auto entries = f.nonzeros();
    if (entries.empty()) return 0.0;
    int reach = 0;
    double cmax = 0.0;
    for (const auto& e : entries) {
        reach = std::max({reach, std::abs(e.n), e.k});
        cmax = std::max(cmax, std::abs(e.c));
    }
    const double big = std::max(reach, 1);
    double acc = 0.0;
    for (const auto& e : entries) {
        const double wn = std::pow(std::abs(e.n) / big, 2.0 * s);
        const double wk = std::pow(e.k / big, 2.0 * s);
        const double c = std::abs(e.c) / cmax;
        acc += (wn + wk) * c * c;
    }
    return std::pow(big, s) * cmax * std::sqrt(acc);
}

double xs_norm(const SpectralField& f, double s) { return xs_norm(f.as_trig(), s); }

double l2_inner(const SpectralField& f, const SpectralField& g) {
    // ∫ e^{int} sin(kx) e^{imt} sin(jx) = 2π δ_{n,-m} · π δ_{k,j}
    double acc = 0.0;
    for (const auto& e : f.nonzeros()) acc += (e.c * std::conj(g.coeff(e.n, e.k))).real();
    return 2.0 * std::numbers::pi * std::numbers::pi * acc;
}

SpectralField d_t(const SpectralField& f) {
    return f.map_modes([](int n, int) { return Complex(0.0, static_cast<double>(n)); });
}

namespace {

bool is_kernel(int n, int k) { return k == 1 && (n == 1 || n == -1); }

}  // namespace

SpectralField project_kernel(const SpectralField& f) {
    return f.map_modes([](int n, int k) { return is_kernel(n, k) ? Complex(1.0) : Complex(0.0); });
}

SpectralField project_V(const SpectralField& f) {
    return f.map_modes([](int n, int k) { return is_kernel(n, k) ? Complex(0.0) : Complex(1.0); });
}

SpectralField project_band(const SpectralField& f, int K, BandSide side) {
    if (K < 1) throw Error(ErrorCode::InvalidParams, "band cutoff K must be >= 1");
    return f.map_modes([K, side](int, int k) {
        const bool keep = side == BandSide::Above ? k > K : k <= K;
        return keep ? Complex(1.0) : Complex(0.0);
    });
}

double reality_defect(const SpectralField& f) {
    const double m = f.max_abs();
    if (m == 0.0) return 0.0;
    double worst = 0.0;
    for (const auto& e : f.nonzeros()) worst = std::max(worst, std::abs(std::conj(e.c) - f.coeff(-e.n, e.k)));
    return worst / m;
}

// ---------------------------------------------------------------------------
// Direct convolution

namespace {

struct Accumulator {
    TrigField& out;
    Truncation tr;

    void add(int n, int k, double re, double im) {
        if (k > tr.x) return;
        Complex& c = out.at(n, k);
        c = Complex(c.real() + re, c.imag() + im);
    }
};

// Writes only n >= 0; the caller restores n < 0 from reality.
template <Parity PA, Parity PB>
void convolve(const std::vector<SpectralEntry>& a, const std::vector<SpectralEntry>& b, Accumulator acc) {
    const int tmax = acc.tr.t;
    for (const auto& ea : a) {
        const int n_lo = -ea.n;
        const int n_hi = tmax - ea.n;
        auto first = std::lower_bound(b.begin(), b.end(), n_lo,
                                      [](const SpectralEntry& e, int n) { return e.n < n; });
        const double ar = 0.5 * ea.c.real();
        const double ai = 0.5 * ea.c.imag();
        for (auto it = first; it != b.end() && it->n <= n_hi; ++it) {
            const int n = ea.n + it->n;
            const double re = ar * it->c.real() - ai * it->c.imag();
            const double im = ar * it->c.imag() + ai * it->c.real();
            const int ks = ea.k + it->k;
            const int kd = ea.k - it->k;
            if constexpr (PA == Parity::Sine && PB == Parity::Sine) {
                // sin a sin b = (cos(a-b) - cos(a+b)) / 2
                acc.add(n, std::abs(kd), re, im);
                acc.add(n, ks, -re, -im);
            } else if constexpr (PA == Parity::Cosine && PB == Parity::Cosine) {
                // cos a cos b = (cos(a-b) + cos(a+b)) / 2
                acc.add(n, std::abs(kd), re, im);
                acc.add(n, ks, re, im);
            } else if constexpr (PA == Parity::Sine && PB == Parity::Cosine) {
                // sin a cos b = (sin(a+b) + sin(a-b)) / 2
                acc.add(n, ks, re, im);
                if (kd > 0) acc.add(n, kd, re, im);
                if (kd < 0) acc.add(n, -kd, -re, -im);
            } else {
                // cos a sin b = (sin(a+b) + sin(b-a)) / 2
                acc.add(n, ks, re, im);
                if (kd < 0) acc.add(n, -kd, re, im);
                if (kd > 0) acc.add(n, kd, -re, -im);
            }
        }
    }
}

Parity product_parity(Parity a, Parity b) { return a == b ? Parity::Cosine : Parity::Sine; }

TrigField multiply_direct(const TrigField& f, const TrigField& g, Truncation out_tr, double prune) {
    const Parity pa = f.parity();
    const Parity pb = g.parity();
    TrigField out(product_parity(pa, pb), out_tr);
    const auto a = f.nonzeros();
    const auto b = g.nonzeros();  // sorted by n by construction
    Accumulator acc{out, out_tr};
    if (pa == Parity::Sine && pb == Parity::Sine) convolve<Parity::Sine, Parity::Sine>(a, b, acc);
    else if (pa == Parity::Cosine && pb == Parity::Cosine) convolve<Parity::Cosine, Parity::Cosine>(a, b, acc);
    else if (pa == Parity::Sine) convolve<Parity::Sine, Parity::Cosine>(a, b, acc);
    else convolve<Parity::Cosine, Parity::Sine>(a, b, acc);
    out.enforce_reality();
    out.prune(prune);
    return out;
}

Truncation sum_truncation(Truncation a, Truncation b) { return {a.t + b.t, a.x + b.x}; }

}  // namespace

TrigField multiply(const TrigField& f, const TrigField& g, const ProductOptions& opts) {
    const Truncation out = opts.output.value_or(sum_truncation(f.truncation(), g.truncation()));
    if (opts.backend == ProductBackend::PseudoSpectral) {
        return detail::multiply_pseudo_spectral(f, g, out, opts.grid);
    }
    return multiply_direct(f, g, out, opts.prune_relative);
}

SpectralField odd_power(const SpectralField& f, int q, const ProductOptions& opts) {
    if (q < 1 || q % 2 == 0) throw Error(ErrorCode::InvalidParams, "odd_power needs an odd positive exponent");
    const Truncation target = opts.output.value_or(f.truncation());
    if (opts.backend == ProductBackend::PseudoSpectral) {
        return detail::odd_power_pseudo_spectral(f, q, target, opts.grid);
    }
    if (q == 1) return f.with_truncation(target);

    // f^j only needs the modes that can still reach the target after the
    // remaining q - j factors.
    const Truncation tf = f.truncation();
    TrigField acc = f.as_trig();
    for (int j = 2; j <= q; ++j) {
        const Truncation tj{std::min(j * tf.t, target.t + (q - j) * tf.t),
                            std::min(j * tf.x, target.x + (q - j) * tf.x)};
        acc = multiply_direct(acc, f.as_trig(), tj, opts.prune_relative);
    }
    return SpectralField::from_trig(std::move(acc));
}

}  // namespace wavebif

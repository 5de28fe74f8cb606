#pragma once

#include <complex>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace wavebif {

using Complex = std::complex<double>;

/// Index of the basis function e^{int} sin(kx): temporal frequency n, spatial
/// frequency k >= 1.
struct ModeIndex {
    int n = 0;
    int k = 1;

    friend auto operator<=>(const ModeIndex&, const ModeIndex&) = default;
};

/// Largest |n| and largest k a field may store.
struct Truncation {
    int t = 64;
    int x = 64;

    friend bool operator==(const Truncation&, const Truncation&) = default;
};

inline constexpr Truncation kDefaultTruncation{64, 64};

/// Spatial basis of a trigonometric field: sin(kx), k >= 1, or cos(kx), k >= 0.
enum class Parity { Sine, Cosine };

struct SpectralEntry {
    int n;
    int k;
    Complex c;
};

/// Dense coefficient store for Σ c_{n,k} e^{int} φ_k(x) on |n| <= t, k <= x,
/// where φ_k is sin(kx) or cos(kx) according to the parity. This is the
/// general product space; only odd-in-x (Sine) fields belong to X^s.
class TrigField {
public:
    TrigField(Parity parity, Truncation trunc);

    /// The constant function `value` (Cosine parity, k = 0).
    static TrigField constant(double value, Truncation trunc = kDefaultTruncation);

    [[nodiscard]] Parity parity() const noexcept { return parity_; }
    [[nodiscard]] Truncation truncation() const noexcept { return trunc_; }
    [[nodiscard]] bool is_odd_in_x() const noexcept { return parity_ == Parity::Sine; }
    [[nodiscard]] int k_min() const noexcept { return parity_ == Parity::Sine ? 1 : 0; }

    /// Zero for indices outside the stored range.
    [[nodiscard]] Complex coeff(int n, int k) const noexcept;
    Complex& at(int n, int k);

    [[nodiscard]] std::vector<SpectralEntry> nonzeros() const;
    [[nodiscard]] double max_abs() const noexcept;
    [[nodiscard]] bool is_zero() const noexcept;

    /// Copy restricted (or zero-padded) to another truncation.
    [[nodiscard]] TrigField with_truncation(Truncation trunc) const;

    /// Zero every coefficient with |c| < relative * max|c|.
    void prune(double relative);

    /// Overwrite c_{-n,k} with conj(c_{n,k}) for n > 0 and drop the imaginary
    /// part of c_{0,k}.
    void enforce_reality();

private:
    [[nodiscard]] std::size_t index(int n, int k) const noexcept {
        return static_cast<std::size_t>(n + trunc_.t) * static_cast<std::size_t>(trunc_.x + 1) +
               static_cast<std::size_t>(k);
    }
    [[nodiscard]] bool in_range(int n, int k) const noexcept {
        return n >= -trunc_.t && n <= trunc_.t && k >= k_min() && k <= trunc_.x;
    }

    Parity parity_;
    Truncation trunc_;
    std::vector<Complex> data_;
};

/// A truncated element of X^s: u(t,x) = Σ c_{n,k} e^{int} sin(kx) with
/// conj(c_{n,k}) = c_{-n,k}. Immutable once built.
///
/// Real data d cos(nt) sin(kx) + e sin(nt) sin(kx) (n >= 1) maps to
/// c_{±n,k} = (d ∓ i e)/2; a pure sin(kx) term has c_{0,k} equal to its
/// real amplitude.
class SpectralField {
public:
    explicit SpectralField(Truncation trunc = kDefaultTruncation);

    /// Throws RealityViolation unless `field` has Sine parity. Reality is
    /// re-imposed on the copy.
    static SpectralField from_trig(TrigField field);

    [[nodiscard]] Truncation truncation() const noexcept { return data_.truncation(); }
    [[nodiscard]] Complex coeff(int n, int k) const noexcept { return data_.coeff(n, k); }
    [[nodiscard]] Complex coeff(ModeIndex m) const noexcept { return data_.coeff(m.n, m.k); }
    [[nodiscard]] std::vector<SpectralEntry> nonzeros() const { return data_.nonzeros(); }
    [[nodiscard]] double max_abs() const noexcept { return data_.max_abs(); }
    [[nodiscard]] bool is_zero() const noexcept { return data_.is_zero(); }
    [[nodiscard]] const TrigField& as_trig() const noexcept { return data_; }

    [[nodiscard]] SpectralField with_truncation(Truncation trunc) const;

    /// Applies `multiplier(n, k)` to every stored coefficient. The multiplier
    /// must satisfy multiplier(-n,k) = conj(multiplier(n,k)) for the result to
    /// stay real; reality is re-imposed afterwards.
    template <typename F>
    [[nodiscard]] SpectralField map_modes(F&& multiplier) const {
        TrigField out = data_;
        const Truncation tr = truncation();
        for (int n = -tr.t; n <= tr.t; ++n) {
            for (int k = 1; k <= tr.x; ++k) {
                Complex& c = out.at(n, k);
                if (c != Complex{}) c *= multiplier(n, k);
            }
        }
        return from_trig(std::move(out));
    }

    friend SpectralField operator+(const SpectralField& a, const SpectralField& b);
    friend SpectralField operator-(const SpectralField& a, const SpectralField& b);
    friend SpectralField operator*(double scale, const SpectralField& f);

private:
    explicit SpectralField(TrigField data);

    TrigField data_;
};

using FieldEntry = std::pair<ModeIndex, Complex>;

/// Builds a field from (index, amplitude) pairs, auto-filling missing
/// conjugate partners. Throws NonPositiveK, RealityViolation (conflicting
/// partners or a non-real n = 0 amplitude) or TruncationOverflow.
SpectralField make_field(std::span<const FieldEntry> entries, Truncation trunc = kDefaultTruncation);
SpectralField make_field(std::initializer_list<FieldEntry> entries, Truncation trunc = kDefaultTruncation);

/// Entries for d cos(nt) sin(kx) + e sin(nt) sin(kx); n >= 0 (e is ignored
/// for n = 0).
std::vector<FieldEntry> real_mode(int n, int k, double cos_coeff, double sin_coeff);

/// ρ cos(t) sin(x).
SpectralField kernel_mode(double rho, Truncation trunc = kDefaultTruncation);

/// Pointwise value. Throws RealityViolation if the imaginary part of the sum
/// exceeds 1e-12 of the coefficient mass.
double evaluate(const SpectralField& f, double t, double x);
double evaluate(const TrigField& f, double t, double x);

/// sqrt(Σ (|n|^{2s} + k^{2s}) |c_{n,k}|²), accumulated with the largest
/// weight and the largest coefficient factored out so s ≈ 20 with n ≈ 200
/// neither overflows nor underflows. Uses 0^0 = 1.
double xs_norm(const SpectralField& f, double s);
double xs_norm(const TrigField& f, double s);

/// ∫_{T²} f g dt dx over [0, 2π)², exact from the coefficients.
double l2_inner(const SpectralField& f, const SpectralField& g);

SpectralField d_t(const SpectralField& f);

/// Keeps exactly the kernel modes (±1, 1).
SpectralField project_kernel(const SpectralField& f);
/// Zeroes the kernel modes (±1, 1).
SpectralField project_V(const SpectralField& f);

enum class BandSide { Above, Below };
/// Above keeps k > K, Below keeps k <= K.
SpectralField project_band(const SpectralField& f, int K, BandSide side);

/// Largest |conj(c_{n,k}) - c_{-n,k}| relative to max|c| (0 for the zero field).
double reality_defect(const SpectralField& f);

// ---------------------------------------------------------------------------
// Products

enum class ProductBackend {
    /// Convolution in coefficient space. Each output coefficient carries
    /// relative rounding error only, so tiny high modes keep their digits.
    Direct,
    /// Pointwise products on a zero-padded uniform grid via FFTW.
    PseudoSpectral,
};

struct GridSize {
    int t = 0;
    int x = 0;
};

struct ProductOptions {
    ProductBackend backend = ProductBackend::Direct;
    /// Direct backend: coefficients below this fraction of the product's
    /// largest coefficient are dropped. 0 keeps everything.
    double prune_relative = 1e-40;
    /// Pseudo-spectral backend: grid on [0,2π)² (full period in x). Empty
    /// means the smallest alias-free FFT-friendly size.
    std::optional<GridSize> grid;
    /// Output truncation; empty means exact (sum of the input truncations).
    std::optional<Truncation> output;
};

/// Exact product of two trigonometric fields on T². The parity of the
/// result follows the parities of the factors (sin·sin is even in x).
/// Throws TruncationOverflow when a fixed pseudo-spectral grid cannot hold
/// the requested output modes without aliasing.
TrigField multiply(const TrigField& f, const TrigField& g, const ProductOptions& opts = {});

/// f^q for odd q, truncated to f's truncation (exact up to it). Throws
/// AliasingDetected if the pseudo-spectral grid is too small or the result
/// leaks into the cosine-in-x sector by more than 1e-12 ‖f‖^q.
SpectralField odd_power(const SpectralField& f, int q, const ProductOptions& opts = {});

}  // namespace wavebif

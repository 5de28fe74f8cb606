#include "pseudo_spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include "wavebif/error.hpp"

namespace wavebif::detail {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

/// Complex samples of a field on the uniform grid over [0,2π)², stored in
/// the FFTW row-major layout (t rows, x columns).
class GridBuffer {
public:
    GridBuffer(int mt, int mx)
        : mt_(mt), mx_(mx),
          data_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(mt) *
                                                       static_cast<std::size_t>(mx)))) {
        std::fill_n(reinterpret_cast<double*>(data_), 2 * static_cast<std::size_t>(mt) * mx, 0.0);
    }
    GridBuffer(const GridBuffer&) = delete;
    GridBuffer& operator=(const GridBuffer&) = delete;
    ~GridBuffer() { fftw_free(data_); }

    [[nodiscard]] Complex get(int n, int kk) const {
        const auto& v = data_[slot(n, kk)];
        return {v[0], v[1]};
    }
    void add(int n, int kk, Complex c) {
        auto& v = data_[slot(n, kk)];
        v[0] += c.real();
        v[1] += c.imag();
    }
    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(mt_) * mx_; }
    fftw_complex* raw() { return data_; }

    void transform(int sign) {
        fftw_plan plan;
        {
            std::lock_guard lock(planner_mutex());
            plan = fftw_plan_dft_2d(mt_, mx_, data_, data_, sign, FFTW_ESTIMATE);
        }
        fftw_execute(plan);
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }

private:
    [[nodiscard]] std::size_t slot(int n, int kk) const {
        const int row = ((n % mt_) + mt_) % mt_;
        const int col = ((kk % mx_) + mx_) % mx_;
        return static_cast<std::size_t>(row) * mx_ + static_cast<std::size_t>(col);
    }

    int mt_;
    int mx_;
    fftw_complex* data_;
};

void scatter(const TrigField& f, GridBuffer& g) {
    const Complex half_over_i(0.0, -0.5);  // 1/(2i)
    for (const auto& e : f.nonzeros()) {
        if (f.parity() == Parity::Sine) {
            g.add(e.n, e.k, e.c * half_over_i);
            g.add(e.n, -e.k, -e.c * half_over_i);
        } else if (e.k == 0) {
            g.add(e.n, 0, e.c);
        } else {
            g.add(e.n, e.k, 0.5 * e.c);
            g.add(e.n, -e.k, 0.5 * e.c);
        }
    }
}

struct Gathered {
    TrigField field;
    double leak;  // largest coefficient of the opposite x-parity
};

Gathered gather(const GridBuffer& g, Parity parity, Truncation out) {
    Gathered r{TrigField(parity, out), 0.0};
    for (int n = -out.t; n <= out.t; ++n) {
        if (parity == Parity::Sine) {
            r.leak = std::max(r.leak, std::abs(g.get(n, 0)));
        } else {
            r.field.at(n, 0) = g.get(n, 0);
        }
        for (int k = 1; k <= out.x; ++k) {
            const Complex plus = g.get(n, k);
            const Complex minus = g.get(n, -k);
            if (parity == Parity::Sine) {
                r.field.at(n, k) = Complex(0.0, 1.0) * (plus - minus);
                r.leak = std::max(r.leak, std::abs(plus + minus));
            } else {
                r.field.at(n, k) = plus + minus;
                r.leak = std::max(r.leak, std::abs(plus - minus));
            }
        }
    }
    r.field.enforce_reality();
    return r;
}

GridSize choose_grid(int need_t, int need_x, std::optional<GridSize> grid, ErrorCode too_small) {
    if (!grid) return {smooth_size(need_t), smooth_size(need_x)};
    if (grid->t < need_t || grid->x < need_x) {
        throw Error(too_small, "grid " + std::to_string(grid->t) + "x" + std::to_string(grid->x) +
                                   " cannot resolve the requested modes without aliasing (needs " +
                                   std::to_string(need_t) + "x" + std::to_string(need_x) + ")");
    }
    return *grid;
}

void normalize_forward(GridBuffer& g) {
    const double scale = 1.0 / static_cast<double>(g.size());
    double* p = reinterpret_cast<double*>(g.raw());
    for (std::size_t i = 0; i < 2 * g.size(); ++i) p[i] *= scale;
}

}  // namespace

int smooth_size(int n) {
    for (int m = std::max(n, 1);; ++m) {
        int r = m;
        for (int p : {2, 3, 5}) {
            while (r % p == 0) r /= p;
        }
        if (r == 1) return m;
    }
}

TrigField multiply_pseudo_spectral(const TrigField& f, const TrigField& g, Truncation out,
                                   std::optional<GridSize> grid) {
    const Truncation a = f.truncation();
    const Truncation b = g.truncation();
    // exponential x-index ranges over [-x, x], so the x-grid needs the same
    // headroom as the t-grid
    const GridSize gs = choose_grid(out.t + a.t + b.t + 1, out.x + a.x + b.x + 1, grid,
                                    ErrorCode::TruncationOverflow);
    GridBuffer gf(gs.t, gs.x);
    GridBuffer gg(gs.t, gs.x);
    scatter(f, gf);
    scatter(g, gg);
    gf.transform(FFTW_BACKWARD);
    gg.transform(FFTW_BACKWARD);
    fftw_complex* pf = gf.raw();
    fftw_complex* pg = gg.raw();
    for (std::size_t i = 0; i < gf.size(); ++i) {
        // both factors are real-valued; drop rounding residue in the imaginary part
        pf[i][0] = pf[i][0] * pg[i][0];
        pf[i][1] = 0.0;
    }
    gf.transform(FFTW_FORWARD);
    normalize_forward(gf);
    const Parity parity = f.parity() == g.parity() ? Parity::Cosine : Parity::Sine;
    return gather(gf, parity, out).field;
}

SpectralField odd_power_pseudo_spectral(const SpectralField& f, int q, Truncation out,
                                        std::optional<GridSize> grid) {
    const Truncation tf = f.truncation();
    const GridSize gs =
        choose_grid(out.t + q * tf.t + 1, out.x + q * tf.x + 1, grid, ErrorCode::AliasingDetected);
    GridBuffer g(gs.t, gs.x);
    scatter(f.as_trig(), g);
    g.transform(FFTW_BACKWARD);
    fftw_complex* p = g.raw();
    for (std::size_t i = 0; i < g.size(); ++i) {
        p[i][0] = std::pow(p[i][0], q);
        p[i][1] = 0.0;
    }
    g.transform(FFTW_FORWARD);
    normalize_forward(g);
    Gathered r = gather(g, Parity::Sine, out);
    double norm_pow = 0.0;
    for (const auto& e : f.nonzeros()) norm_pow += std::abs(e.c);
    norm_pow = std::pow(norm_pow, q);
    if (r.leak > 1e-12 * std::max(norm_pow, std::numeric_limits<double>::min())) {
        throw Error(ErrorCode::AliasingDetected, "odd power leaked into the cosine-in-x sector");
    }
    return SpectralField::from_trig(std::move(r.field));
}

}  // namespace wavebif::detail

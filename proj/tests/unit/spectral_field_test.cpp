#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "wavebif/error.hpp"
#include "wavebif/sampling.hpp"
#include "wavebif/spectral_field.hpp"

namespace wavebif {
namespace {

using testing::brute_value;
using testing::kPi;
using testing::torus_integral;

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an exception";
    return ErrorCode::InvalidParams;
}

SpectralField sin_t_sin_x(int nt, int kx, double amp = 1.0, Truncation tr = kDefaultTruncation) {
    return make_field(real_mode(nt, kx, 0.0, amp), tr);
}

TEST(MakeField, EmptyInputIsZeroField) {
    const SpectralField f = make_field({});
    EXPECT_TRUE(f.is_zero());
    EXPECT_TRUE(f.nonzeros().empty());
}

TEST(MakeField, CosineKernelFromConjugatePair) {
    const double rho = 0.3;
    const SpectralField f = make_field({{{1, 1}, rho / 2}, {{-1, 1}, rho / 2}});
    for (double t : {0.0, 0.4, 2.1}) {
        for (double x : {0.3, 1.7}) EXPECT_NEAR(evaluate(f, t, x), rho * std::cos(t) * std::sin(x), 1e-15);
    }
    const SpectralField g = kernel_mode(rho);
    EXPECT_EQ(f.coeff(1, 1), g.coeff(1, 1));
    EXPECT_EQ(f.coeff(-1, 1), g.coeff(-1, 1));
}

TEST(MakeField, MissingPartnerIsConjugated) {
    const SpectralField f = make_field({{{1, 1}, Complex(0.0, 0.5)}});
    EXPECT_EQ(f.coeff(-1, 1), Complex(0.0, -0.5));
    // (i/2) e^{it} - (i/2) e^{-it} = -sin t
    for (double t : {0.2, 1.3, 4.0}) {
        for (double x : {0.5, 2.5}) {
            EXPECT_NEAR(brute_value(f, t, x), -std::sin(t) * std::sin(x), 1e-15);
            EXPECT_NEAR(std::imag(testing::brute_sum(f, t, x)), 0.0, 1e-15);
        }
    }
}

TEST(MakeField, RejectsBadInput) {
    EXPECT_EQ(code_of([] { make_field({{{1, 0}, 1.0}}); }), ErrorCode::NonPositiveK);
    EXPECT_EQ(code_of([] { make_field({{{2, 1}, 1.0}, {{-2, 1}, 2.0}}); }), ErrorCode::RealityViolation);
    EXPECT_EQ(code_of([] { make_field({{{0, 3}, Complex(1.0, 1.0)}}); }), ErrorCode::RealityViolation);
    EXPECT_EQ(code_of([] { make_field({{{5, 1}, 1.0}}, Truncation{4, 4}); }), ErrorCode::TruncationOverflow);
}

TEST(MakeField, RealModeConvention) {
    // d cos(nt) + e sin(nt) gives c_{±n} = (d ∓ i e)/2
    const SpectralField f = make_field(real_mode(2, 3, 0.7, -0.4));
    EXPECT_EQ(f.coeff(2, 3), Complex(0.35, 0.2));
    EXPECT_EQ(f.coeff(-2, 3), Complex(0.35, -0.2));
    for (double t : {0.1, 2.2}) {
        const double expected = (0.7 * std::cos(2 * t) - 0.4 * std::sin(2 * t)) * std::sin(3 * 0.9);
        EXPECT_NEAR(evaluate(f, t, 0.9), expected, 1e-15);
    }
}

TEST(Evaluate, Examples) {
    const double rho = 0.01;
    EXPECT_NEAR(evaluate(kernel_mode(rho), 0.0, kPi / 2), rho, 1e-18);
    EXPECT_EQ(evaluate(SpectralField{}, 1.0, 2.0), 0.0);
    EXPECT_NEAR(evaluate(sin_t_sin_x(3, 2), kPi / 6, kPi / 4), 1.0, 1e-15);
}

TEST(XsNorm, Examples) {
    EXPECT_EQ(xs_norm(SpectralField{}, 12.0), 0.0);
    for (double s : {0.0, 1.0, 12.0, 20.0}) EXPECT_NEAR(xs_norm(kernel_mode(0.25), s), 0.25, 1e-16);
    // pure sin(2x): c_{0,2} = 1, weight 0^4 + 2^4
    const SpectralField f = make_field({{{0, 2}, 1.0}});
    EXPECT_NEAR(xs_norm(f, 2.0), 4.0, 1e-15);
}

TEST(XsNorm, LargeWeightsAgainstExtendedPrecision) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Truncation tr{200, 200};
    for (double s : {12.0, 20.0}) {
        std::vector<FieldEntry> entries;
        long double oracle = 0.0L;
        for (int n : {0, 3, 64, 199}) {
            for (int k : {1, 17, 200}) {
                const Complex c = n == 0 ? Complex(u(rng), 0.0) : Complex(u(rng), u(rng)) * 1e-30;
                entries.push_back({{n, k}, c});
                const long double w = std::pow(static_cast<long double>(n), 2.0L * s) +
                                      std::pow(static_cast<long double>(k), 2.0L * s);
                const long double a2 = static_cast<long double>(std::norm(c));
                oracle += (n == 0 ? 1.0L : 2.0L) * w * a2;
            }
        }
        const double got = xs_norm(make_field(entries, tr), s);
        EXPECT_TRUE(std::isfinite(got));
        EXPECT_LT(testing::rel_diff(got, static_cast<double>(std::sqrt(oracle))), 1e-13) << "s = " << s;
    }
}

TEST(XsNorm, ParsevalAgainstQuadrature) {
    std::mt19937_64 rng(3);
    SampleSpec spec;
    spec.exclude_kernel = false;
    for (int i = 0; i < 10; ++i) {
        const SpectralField f = random_field(rng, spec);
        const double quad = torus_integral([&](double t, double x) { return std::pow(evaluate(f, t, x), 2); }, 32);
        // ‖u‖²_{X^0} = (1/π²) ∫ u²
        EXPECT_LT(testing::rel_diff(xs_norm(f, 0.0) * xs_norm(f, 0.0), quad / (kPi * kPi)), 1e-10);
    }
}

TEST(DerivativeInTime, Examples) {
    const double rho = 0.2;
    const SpectralField d = d_t(kernel_mode(rho));
    const SpectralField expected = make_field(real_mode(1, 1, 0.0, -rho));
    EXPECT_EQ(d.coeff(1, 1), expected.coeff(1, 1));
    EXPECT_EQ(d.coeff(-1, 1), expected.coeff(-1, 1));
    EXPECT_TRUE(d_t(SpectralField{}).is_zero());
    const SpectralField g = d_t(sin_t_sin_x(3, 1));
    for (double t : {0.3, 1.9}) {
        EXPECT_NEAR(evaluate(g, t, 0.8), 3 * std::cos(3 * t) * std::sin(0.8), 1e-14);
    }
}

TEST(Multiply, SineSquaredIsEvenInX) {
    const SpectralField s = make_field({{{0, 1}, 1.0}});
    const TrigField sq = multiply(s.as_trig(), s.as_trig());
    EXPECT_EQ(sq.parity(), Parity::Cosine);
    EXPECT_FALSE(sq.is_odd_in_x());
    EXPECT_NEAR(sq.coeff(0, 0).real(), 0.5, 1e-16);
    EXPECT_NEAR(sq.coeff(0, 2).real(), -0.5, 1e-16);
    EXPECT_EQ(sq.nonzeros().size(), 2u);
}

TEST(Multiply, UnitIsIdentity) {
    const SpectralField f = sin_t_sin_x(1, 1);
    const TrigField one = TrigField::constant(1.0, f.truncation());
    const SpectralField g = SpectralField::from_trig(multiply(f.as_trig(), one, {.output = f.truncation()}));
    EXPECT_EQ(g.coeff(1, 1), f.coeff(1, 1));
    EXPECT_EQ(g.coeff(-1, 1), f.coeff(-1, 1));
    EXPECT_EQ(g.nonzeros().size(), 2u);
}

SpectralField cubed_expansion(double scale = 1.0) {
    // sin³a = (3 sin a - sin 3a)/4 in both variables
    std::vector<FieldEntry> e;
    for (auto [n, k, c] : {std::tuple{1, 1, 9.0}, {1, 3, -3.0}, {3, 1, -3.0}, {3, 3, 1.0}}) {
        for (const FieldEntry& x : real_mode(n, k, 0.0, scale * c / 16.0)) e.push_back(x);
    }
    return make_field(e);
}

TEST(Multiply, TripleProductMatchesExpansion) {
    const SpectralField f = sin_t_sin_x(1, 1);
    const TrigField sq = multiply(f.as_trig(), f.as_trig());
    const SpectralField cube = SpectralField::from_trig(multiply(sq, f.as_trig(), {.output = f.truncation()}));
    const SpectralField expected = cubed_expansion();
    EXPECT_LT((cube - expected).max_abs(), 1e-17);
    EXPECT_EQ(cube.nonzeros().size(), expected.nonzeros().size());
}

TEST(Multiply, PointwiseAgreementOnRandomFields) {
    std::mt19937_64 rng(5);
    SampleSpec spec;
    spec.max_n = 5;
    spec.max_k = 5;
    spec.exclude_kernel = false;
    std::uniform_real_distribution<double> pt(0.0, 2 * kPi);
    for (ProductBackend b : {ProductBackend::Direct, ProductBackend::PseudoSpectral}) {
        const SpectralField f = random_field(rng, spec);
        const SpectralField g = random_field(rng, spec);
        const TrigField fg = multiply(f.as_trig(), g.as_trig(), {.backend = b});
        for (int i = 0; i < 20; ++i) {
            const double t = pt(rng);
            const double x = pt(rng);
            EXPECT_NEAR(evaluate(fg, t, x), brute_value(f, t, x) * brute_value(g, t, x), 1e-12);
        }
    }
}

TEST(Multiply, FixedGridTooSmallOverflows) {
    const SpectralField f = sin_t_sin_x(3, 3);
    ProductOptions opts;
    opts.backend = ProductBackend::PseudoSpectral;
    opts.grid = GridSize{4, 4};
    EXPECT_EQ(code_of([&] { multiply(f.as_trig(), f.as_trig(), opts); }), ErrorCode::TruncationOverflow);
}

TEST(OddPower, Examples) {
    const SpectralField f = sin_t_sin_x(1, 1);
    for (ProductBackend b : {ProductBackend::Direct, ProductBackend::PseudoSpectral}) {
        const SpectralField cube = odd_power(f, 3, {.backend = b});
        EXPECT_LT((cube - cubed_expansion()).max_abs(), 1e-15);
        EXPECT_TRUE(odd_power(SpectralField{}, 5, {.backend = b}).is_zero());
    }
    const SpectralField k = kernel_mode(0.01);
    const SpectralField same = odd_power(k, 1);
    EXPECT_EQ(same.coeff(1, 1), k.coeff(1, 1));
    EXPECT_EQ(same.nonzeros().size(), 2u);
    EXPECT_EQ(code_of([&] { odd_power(f, 2); }), ErrorCode::InvalidParams);
}

TEST(OddPower, BackendsAgreeAndMatchPointwisePowers) {
    std::mt19937_64 rng(8);
    SampleSpec spec;
    spec.max_n = 3;
    spec.max_k = 3;
    spec.exclude_kernel = false;
    spec.trunc = {24, 24};
    std::uniform_real_distribution<double> pt(0.0, 2 * kPi);
    for (int q : {3, 5, 7}) {
        const SpectralField f = random_field(rng, spec);
        const SpectralField a = odd_power(f, q);
        const SpectralField b = odd_power(f, q, {.backend = ProductBackend::PseudoSpectral});
        EXPECT_LT((a - b).max_abs(), 1e-12 * a.max_abs());
        // rounding in the power is relative to the coefficient mass, not to the value
        double mass = 0.0;
        for (const SpectralEntry& e : f.nonzeros()) mass += std::abs(e.c);
        for (int i = 0; i < 10; ++i) {
            const double t = pt(rng);
            const double x = pt(rng);
            EXPECT_NEAR(evaluate(a, t, x), std::pow(brute_value(f, t, x), q), 1e-13 * std::pow(mass, q));
        }
    }
}

TEST(OddPower, UndersizedGridIsAliasing) {
    const SpectralField f = sin_t_sin_x(2, 2, 1.0, {16, 16});
    ProductOptions opts;
    opts.backend = ProductBackend::PseudoSpectral;
    opts.grid = GridSize{8, 8};
    EXPECT_EQ(code_of([&] { odd_power(f, 3, opts); }), ErrorCode::AliasingDetected);
}

TEST(Projections, KernelAndComplement) {
    const SpectralField k = kernel_mode(0.5);
    EXPECT_EQ(project_kernel(k).coeff(1, 1), k.coeff(1, 1));
    EXPECT_TRUE(project_V(k).is_zero());
    EXPECT_TRUE(project_kernel(sin_t_sin_x(3, 1)).is_zero());

    const SpectralField a = make_field(real_mode(1, 1, 1.0, 0.0));
    const SpectralField b = sin_t_sin_x(2, 2);
    const SpectralField f = a + b;
    EXPECT_TRUE((project_kernel(f) - a).is_zero());
    EXPECT_TRUE((project_V(f) - b).is_zero());
}

TEST(Projections, Band) {
    const SpectralField f = make_field({{{0, 1}, 1.0}, {{0, 5}, 1.0}});
    const SpectralField above = project_band(f, 2, BandSide::Above);
    EXPECT_EQ(above.coeff(0, 5), Complex(1.0));
    EXPECT_EQ(above.coeff(0, 1), Complex{});
    EXPECT_TRUE(project_band(f, 64, BandSide::Above).is_zero());
}

class RandomFieldProperties : public ::testing::TestWithParam<int> {};

TEST_P(RandomFieldProperties, ProjectionLaws) {
    std::mt19937_64 rng(GetParam());
    SampleSpec spec;
    spec.exclude_kernel = false;
    const SpectralField f = random_field(rng, spec);
    const SpectralField k = project_kernel(f);
    const SpectralField v = project_V(f);
    EXPECT_TRUE((k + v - f).is_zero());
    EXPECT_TRUE((project_kernel(k) - k).is_zero());
    EXPECT_LE(std::abs(l2_inner(k, v)), 1e-12 * std::max(1.0, xs_norm(f, 0.0) * xs_norm(f, 0.0)));
    for (int K : {1, 3, 6}) {
        const SpectralField parts = project_band(f, K, BandSide::Above) + project_band(f, K, BandSide::Below);
        EXPECT_TRUE((parts - f).is_zero());
    }
}

TEST_P(RandomFieldProperties, RealityIsPreserved) {
    std::mt19937_64 rng(100 + GetParam());
    SampleSpec spec;
    spec.max_n = 4;
    spec.max_k = 4;
    spec.exclude_kernel = false;
    spec.trunc = {32, 32};
    const SpectralField f = random_field(rng, spec);
    const SpectralField g = random_field(rng, spec);
    EXPECT_EQ(reality_defect(f), 0.0);
    EXPECT_LE(reality_defect(d_t(f)), 1e-14);
    EXPECT_LE(reality_defect(f + g), 1e-14);
    EXPECT_LE(reality_defect(odd_power(f, 3)), 1e-14);
    EXPECT_LE(reality_defect(odd_power(f, 3, {.backend = ProductBackend::PseudoSpectral})), 1e-14);
    EXPECT_LE(reality_defect(project_V(f)), 1e-14);
}

TEST_P(RandomFieldProperties, L2InnerMatchesQuadrature) {
    std::mt19937_64 rng(200 + GetParam());
    SampleSpec spec;
    spec.exclude_kernel = false;
    const SpectralField f = random_field(rng, spec);
    const SpectralField g = random_field(rng, spec);
    const double quad = torus_integral([&](double t, double x) { return evaluate(f, t, x) * evaluate(g, t, x); }, 32);
    EXPECT_NEAR(l2_inner(f, g), quad, 1e-10 * std::max(1.0, std::abs(quad)));
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomFieldProperties, ::testing::Range(1, 11));

TEST(AlgebraInequality, RandomUnitPairs) {
    std::mt19937_64 rng(42);
    SampleSpec spec;
    spec.trunc = {16, 16};
    int violations = 0;
    for (double s : {2.0, 12.0}) {
        for (int i = 0; i < 100; ++i) {
            const SpectralField v = random_field_with_norm(rng, spec, s, 1.0);
            const SpectralField w = random_field_with_norm(rng, spec, s, 1.0);
            if (xs_norm(multiply(v.as_trig(), w.as_trig()), s) > std::pow(2.0, 2 * s)) ++violations;
        }
    }
    EXPECT_EQ(violations, 0);
}

}  // namespace
}  // namespace wavebif

#include <gtest/gtest.h>

#include "wavebif/error.hpp"
#include "wavebif/exact_trig.hpp"

namespace wavebif {
namespace {

TEST(ExactTrig, SineCubedExpansion) {
    // sin³x = (3 sin x - sin 3x)/4
    const ExactTrigPoly cube = ExactTrigPoly::sin_x(1).pow(3);
    EXPECT_TRUE(cube.is_odd_in_x());
    EXPECT_DOUBLE_EQ(cube.sine_coeff(0, 1).real_value(), 0.75);
    EXPECT_DOUBLE_EQ(cube.sine_coeff(0, 3).real_value(), -0.25);
    EXPECT_TRUE(cube.sine_coeff(0, 2).is_zero());
    EXPECT_TRUE(cube.sine_coeff(0, 5).is_zero());
}

TEST(ExactTrig, ProductOfBasisFunctions) {
    // sin t cos t = sin(2t)/2: e^{2it} coefficient is -i/4
    const ExactTrigPoly p = ExactTrigPoly::sin_t(1) * ExactTrigPoly::cos_t(1);
    const GaussianDyadic c = p.coeff(2, 0);
    EXPECT_EQ(c.real_value(), 0.0);
    EXPECT_EQ(c.imag_value(), -0.25);
    EXPECT_TRUE(p.coeff(0, 0).is_zero());
}

TEST(ExactTrig, SumCancelsExactly) {
    const ExactTrigPoly a = ExactTrigPoly::sin_x(3);
    EXPECT_TRUE((a + a.scaled(-1)).is_zero());
    EXPECT_EQ(ExactTrigPoly::one().coeff(0, 0).real_value(), 1.0);
    EXPECT_EQ(ExactTrigPoly::cos_x(0).coeff(0, 0).real_value(), 1.0);
}

TEST(ExactTrig, KernelAndBandFilters) {
    const ExactTrigPoly base = ExactTrigPoly::sin_t(1) * ExactTrigPoly::sin_x(1);
    EXPECT_TRUE(base.without_kernel().is_zero());
    const ExactTrigPoly cube = base.pow(3);
    EXPECT_TRUE(cube.above_band(3).is_zero());
    EXPECT_FALSE(cube.above_band(2).is_zero());
    // sin t sin 3x survives the kernel filter with coefficient -3/16 on sin t
    EXPECT_FALSE(cube.without_kernel().is_zero());
}

TEST(ExactTrig, NumeratorOverflowIsReported) {
    try {
        (void)ExactTrigPoly::sin_x(1).pow(101);
        FAIL() << "expected overflow";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TruncationOverflow);
    }
}

}  // namespace
}  // namespace wavebif

#pragma once

#include <cstdint>
#include <random>

#include "wavebif/spectral_field.hpp"

namespace wavebif {

/// Random real fields on |n| <= max_n, 1 <= k <= max_k with Gaussian
/// coefficients damped by (1 + |n| + k)^{-decay}.
struct SampleSpec {
    int max_n = 6;
    int max_k = 6;
    double decay = 0.0;
    bool exclude_kernel = true;
    Truncation trunc = kDefaultTruncation;
};

SpectralField random_field(std::mt19937_64& rng, const SampleSpec& spec);

/// As random_field, rescaled to ‖f‖_{X^s} = norm.
SpectralField random_field_with_norm(std::mt19937_64& rng, const SampleSpec& spec, double s, double norm);

}  // namespace wavebif

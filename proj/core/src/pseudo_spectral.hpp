#pragma once

#include <optional>

#include "wavebif/spectral_field.hpp"

namespace wavebif::detail {

/// Smallest integer >= n whose only prime factors are 2, 3 and 5.
int smooth_size(int n);

TrigField multiply_pseudo_spectral(const TrigField& f, const TrigField& g, Truncation out,
                                   std::optional<GridSize> grid);

SpectralField odd_power_pseudo_spectral(const SpectralField& f, int q, Truncation out,
                                        std::optional<GridSize> grid);

}  // namespace wavebif::detail

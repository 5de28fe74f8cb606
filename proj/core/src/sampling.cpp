#include "wavebif/sampling.hpp"

#include <cmath>
#include <vector>

namespace wavebif {

SpectralField random_field(std::mt19937_64& rng, const SampleSpec& spec) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<FieldEntry> entries;
    for (int n = 0; n <= spec.max_n; ++n) {
        for (int k = 1; k <= spec.max_k; ++k) {
            if (spec.exclude_kernel && n == 1 && k == 1) continue;
            const double damp = std::pow(1.0 + n + k, -spec.decay);
            const double re = damp * gauss(rng);
            const double im = n == 0 ? 0.0 : damp * gauss(rng);
            entries.push_back({{n, k}, Complex(re, im)});
        }
    }
    return make_field(entries, spec.trunc);
}

SpectralField random_field_with_norm(std::mt19937_64& rng, const SampleSpec& spec, double s, double norm) {
    SpectralField f = random_field(rng, spec);
    const double current = xs_norm(f, s);
    return current > 0.0 ? (norm / current) * f : f;
}

}  // namespace wavebif

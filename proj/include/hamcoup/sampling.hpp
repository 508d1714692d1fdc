// sampling.hpp — deterministic state sampling for the symplecticity checks.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hamcoup/errors.hpp"
#include "hamcoup/layout.hpp"

namespace hamcoup {

// Uniform box of the given half-width around a reference state.  The seed
// fully determines the sample, so verdicts are reproducible.
inline std::vector<PhaseState> sample_states(const PhaseState& reference,
                                             Index count, double half_width,
                                             std::uint64_t seed) {
    if (count < 1)
        throw UsageError("sample_states: need at least one sample");
    if (!(half_width >= 0.0))
        throw UsageError("sample_states: half_width must be nonnegative");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> box(-half_width, half_width);
    std::vector<PhaseState> states;
    states.reserve(static_cast<std::size_t>(count));
    for (Index i = 0; i < count; ++i) {
        Vec z = reference.z();
        for (Index k = 0; k < z.size(); ++k) z[k] += box(rng);
        states.emplace_back(reference.layout(), std::move(z), reference.t());
    }
    return states;
}

} // namespace hamcoup

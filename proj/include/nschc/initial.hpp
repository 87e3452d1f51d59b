#pragma once

#include <cstdint>

#include "nschc/config.hpp"
#include "nschc/coupled.hpp"
#include "nschc/grid.hpp"

namespace nschc {

/// Counter-based generator: the k-th draw depends only on (seed, k), so a
/// field is reproducible independent of traversal order or thread count.
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t index);

/// Uniform double in [0, 1) from counter_hash (53 random bits).
double counter_uniform(std::uint64_t seed, std::uint64_t index);

ScalarField initial_phi(const Grid& g, const IcConfig& ic, const ModelParams& p);
ScalarField initial_sigma(const Grid& g, const IcConfig& ic);
/// Generated velocity projected to be discretely divergence-free.
MacVelocity initial_velocity(const Grid& g, const IcConfig& ic);

/// Full initial state for a configuration (mu consistent with phi, sigma).
SimState initial_state(const RunConfig& c);

}  // namespace nschc

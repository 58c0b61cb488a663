#pragma once

#include <cstdint>
#include <random>

#include "mgc/graph.hpp"
#include "mgc/model.hpp"
#include "mgc/spectral.hpp"

namespace mgc {

/// Which structure the random communication graph and scaling follow.
///  - DIdentity: independent connected graph, D = I.
///  - Commuting: L = mu * M, random D > 0.
///  - Neither: independent connected graph, random D > 0.
enum class RandomRegime { DIdentity, Commuting, Neither };

using Rng = std::mt19937_64;

/// Connected graph on ids 1..n: random spanning tree plus each remaining pair
/// with probability `extra_edge_prob`. R in [0.05, 1] ohm, L in [1, 100] uH.
[[nodiscard]] ElectricalNetwork random_electrical(Rng& rng, int n, double extra_edge_prob = 0.3);

/// Connected graph on the same ids, weights in [0.2, 2].
[[nodiscard]] CommNetwork random_comm(Rng& rng, const std::vector<DguId>& ids, double gain = 1.0,
                                      double extra_edge_prob = 0.3);

/// Diagonal entries 1 / I^s with I^s in [1, 10] A.
[[nodiscard]] ScalingMatrix random_scaling(Rng& rng, std::size_t n);

[[nodiscard]] CoupledModel random_model(Rng& rng, int n, RandomRegime regime, PrimaryMode mode = PrimaryMode::UnitGain,
                                        double omega_c = kDefaultOmegaC);

}  // namespace mgc

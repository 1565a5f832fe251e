#pragma once

// Seeded random scenario generators. Every generator takes its engine by
// reference; sweeps derive one engine per sample with stream_seed so the
// draw for sample k does not depend on how samples are scheduled.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "bellri/qmodel.hpp"

namespace bellri::sampling {

using Rng = std::mt19937_64;

/// splitmix64 mix of (seed, index).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);
Rng make_rng(std::uint64_t seed, std::uint64_t index);

/// Normalized complex Gaussian vector.
qmodel::StateVector random_state_vector(std::size_t dim, Rng& rng);
qmodel::QuantumState random_pure_state(std::size_t dim, Rng& rng);

/// (G + G^dag)/2 with i.i.d. complex Gaussian G.
qmodel::Observable random_gue_observable(std::size_t dim, Rng& rng);
/// Unit Bloch vector, uniform on the sphere.
std::array<double, 3> random_unit_vector(Rng& rng);
/// n . sigma for a uniform unit n (spectrum +-1).
qmodel::Observable random_qubit_observable(Rng& rng);

enum class ObservableKind { gue, bloch };

/// Random pure state on the product of `dims` with random observables.
qmodel::QuantumScenario random_scenario(std::span<const std::size_t> dims, Rng& rng,
                                        ObservableKind kind = ObservableKind::gue);

/// Random bipartite scenario with party dimensions drawn from [lo, hi].
qmodel::QuantumScenario random_bipartite(std::size_t lo, std::size_t hi, Rng& rng,
                                         ObservableKind kind = ObservableKind::gue);

/// Three qubits (A, B, C) with C(B_j, C_k) = 0 for all j, k. Charlie's axes
/// are drawn orthogonal to B0's covariance vector and B1's axis orthogonal to
/// both of Charlie's; draws that leave no valid axis are retried.
qmodel::QuantumScenario random_uncorrelated_bc(Rng& rng);

/// Star scenario: Alice holds n qubits, experimenter s holds one qubit
/// entangled with Alice's s-th qubit. Alice's observables are random sums of
/// local Bloch terms. Party 0 is Alice (dim 2^n), parties 1..n the
/// experimenters, who are mutually uncorrelated by construction.
qmodel::QuantumScenario random_star_scenario(std::size_t n, Rng& rng);

}  // namespace bellri::sampling

#pragma once

// Seeded random instances: Ginibre densities, Haar unitaries, POVMs,
// contractions and assemblages. Every function draws only from the engine it
// is given, so a fixed seed reproduces the same instance.

#include "distil/assemblage.hpp"
#include "distil/linalg.hpp"

#include <cstdint>
#include <random>

namespace distil::random {

using Engine = std::mt19937_64;

/// Engine for stream `index` derived from a base seed.
Engine derive(std::uint64_t seed, std::uint64_t index);

/// Entries i.i.d. complex standard normal.
Matrix ginibre(Engine& rng, Eigen::Index rows, Eigen::Index cols);
Matrix random_hermitian(Engine& rng, Eigen::Index dim);
/// G G^dagger / tr for a dim x rank Ginibre G.
Matrix random_density(Engine& rng, Eigen::Index dim, Eigen::Index rank);
inline Matrix random_density(Engine& rng, Eigen::Index dim) { return random_density(rng, dim, dim); }
/// Haar unitary via QR of a Ginibre matrix with the phase correction.
Matrix haar_unitary(Engine& rng, Eigen::Index dim);
/// K with largest singular value drawn uniformly from [min_norm, 1].
Matrix random_contraction(Engine& rng, Eigen::Index dim, double min_norm = 0.3);
/// Full-rank contraction with singular values in [min_singular, 1].
Matrix random_invertible_contraction(Engine& rng, Eigen::Index dim, double min_singular = 0.2);
double uniform(Engine& rng, double lo = 0.0, double hi = 1.0);
/// Probability vector drawn uniformly from the simplex.
std::vector<double> random_distribution(Engine& rng, std::size_t n);

/// One Haar-random basis per input, basis vectors dealt round-robin over the
/// outcomes (outcomes beyond dim stay zero).
MeasurementAssemblage random_projective_measurements(Engine& rng, Eigen::Index dim, std::size_t n_inputs,
                                                     std::size_t n_outputs);
/// (1 - noise) projective + noise * I / n_outputs.
MeasurementAssemblage random_noisy_measurements(Engine& rng, Eigen::Index dim, std::size_t n_inputs,
                                                std::size_t n_outputs, double noise);
/// Generic POVMs S^{-1/2} W_a S^{-1/2} from Wishart W_a.
MeasurementAssemblage random_povms(Engine& rng, Eigen::Index dim, std::size_t n_inputs, std::size_t n_outputs);

/// Steering from a random pure entangled state (dim x dim) with projective
/// measurements on the untrusted side.
StateAssemblage random_steerable_assemblage(Engine& rng, Eigen::Index dim, std::size_t n_inputs,
                                            std::size_t n_outputs);
/// Steering from a random mixed state with generic POVMs.
StateAssemblage random_state_assemblage(Engine& rng, Eigen::Index dim, std::size_t n_inputs,
                                        std::size_t n_outputs);
/// Steering from a product state rho_A (x) rho_B.
StateAssemblage random_product_assemblage(Engine& rng, Eigen::Index dim, std::size_t n_inputs,
                                          std::size_t n_outputs);
/// sum_l p(l) p(a|x,l) rho_l with random hidden states and response functions.
StateAssemblage random_lhs_assemblage(Engine& rng, Eigen::Index dim, std::size_t n_inputs,
                                      std::size_t n_outputs, std::size_t n_hidden);

}  // namespace distil::random

#pragma once

#include <cstdint>
#include <random>

#include "macrocoh/linalg.hpp"

namespace macrocoh {

using Rng = std::mt19937_64;

// splitmix64 mix of (seed, index); used to give every sample, restart or
// fuzz case its own stream independent of scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Independent standard complex Gaussian entries (E|z|^2 = 1).
Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);

// Haar-distributed isometry (orthonormal columns), rows >= cols.
Matrix haar_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng);

Matrix random_unitary(Eigen::Index dim, Rng& rng);

// (G + G^dagger)/2 for Gaussian G.
Matrix random_hermitian(Eigen::Index dim, Rng& rng);

}  // namespace macrocoh

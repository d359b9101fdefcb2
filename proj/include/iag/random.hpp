#pragma once

#include <random>

#include "iag/types.hpp"

namespace iag {

Vector gaussian_vector(Index n, std::mt19937_64& rng);

/// Haar-distributed orthogonal matrix via QR of a Gaussian matrix with the
/// usual sign fix on the R diagonal.
Matrix random_rotation(Index n, std::mt19937_64& rng);

}  // namespace iag

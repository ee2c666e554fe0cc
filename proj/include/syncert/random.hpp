#pragma once

// Seeded random instances. Every stochastic routine in the library takes an
// explicit Rng (or seed); there is no global generator.

#include <cstdint>
#include <random>

#include "syncert/numerics.hpp"

namespace syncert {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 0x5eedc0de2024ULL;

/// Matrix with i.i.d. standard complex Gaussian entries.
CMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
CMatrix haar_unitary(std::size_t n, Rng& rng);
/// rows x cols isometry (rows >= cols), first columns of a Haar unitary.
CMatrix random_isometry(std::size_t rows, std::size_t cols, Rng& rng);
/// (G + G^*)/2 for Ginibre G.
CMatrix random_hermitian(std::size_t n, Rng& rng);
/// Uniformly random unit vector.
CVector random_unit_vector(std::size_t n, Rng& rng);
/// Random density matrix W W^* / Tr with W of size n x rank.
CMatrix random_density(std::size_t n, std::size_t rank, Rng& rng);

}  // namespace syncert

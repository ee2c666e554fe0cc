#pragma once

// Small reference instances shared by the tests, the acceptance run and the
// command-line tool.

#include <cstddef>

#include "syncert/games.hpp"
#include "syncert/lcs.hpp"
#include "syncert/random.hpp"
#include "syncert/strategy.hpp"

namespace syncert::fixtures {

/// d = 1, one question, one answer.
PmeStrategy trivial_pme();
/// Qubit, one question measured in the computational basis.
PmeStrategy computational_qubit();
/// Qubit, questions 0 and 1 measure in the Z and X bases.
PmeStrategy two_mub_qubit();

/// 3x3 magic square mod 2: variable 3r+c, rows sum to 0, columns to 1.
/// Constraints 0..2 are rows, 3..5 are columns.
LcsSystem magic_square_system();
/// Two-qubit Pauli operator solution, J -> -I (10 matrices, J last).
std::vector<CMatrix> magic_square_pauli();
/// Joint-spectral-projection PME strategy of the Pauli solution (d = 4, 6 questions, 8 answers).
PmeStrategy magic_square_pme();

/// 2-colouring of a single edge: same vertex forces the same colour, the two
/// endpoints must differ.
SynchronousGame edge_coloring_game();
/// Deterministic classical strategy on C^1 winning edge_coloring_game.
TensorStrategy edge_coloring_strategy();
/// Every answer pair wins unless the synchronicity condition forbids it.
SynchronousGame trivial_game(std::size_t questions, std::size_t answers);

struct PlantedStrategy {
  TensorStrategy strategy;
  CMatrix unitary_a;  // E = W_A (E~ (x) I) W_A^*
  CMatrix unitary_b;  // F = W_B (E~^T (x) I) W_B^*
  CVector aux;        // junk state on C^sA (x) C^sB
  std::size_t junk_a = 0;
  std::size_t junk_b = 0;
};

/// Ideal strategy tensored with a random junk state of the given Schmidt rank
/// (<= min(sA, sB)) and conjugated by Haar-random local unitaries.
PlantedStrategy planted_strategy(const PmeStrategy& ideal, std::size_t junk_a,
                                 std::size_t junk_b, std::size_t schmidt_rank, Rng& rng);

}  // namespace syncert::fixtures

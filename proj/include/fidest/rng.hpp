#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fidest/complex_matrix.hpp"

namespace fidest::rng {

// Deterministic random helpers.  Distributions are hand-rolled on top of
// mt19937_64 so generated states are byte-identical across platforms and
// standard-library versions (std::*_distribution makes no such promise).

inline double u01(std::mt19937_64& g) {
  // 53 random bits in [0,1)
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double gauss(std::mt19937_64& g) {
  // Box-Muller, one sample per call
  double u = 0.0;
  while (u == 0.0) u = u01(g);
  double v = u01(g);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

// Matrix of iid standard complex Gaussians.
ComplexMatrix ginibre(std::size_t dim, std::mt19937_64& g);

// Haar-distributed unitary: Gram-Schmidt on a Ginibre matrix.
ComplexMatrix haar_unitary(std::size_t dim, std::mt19937_64& g);

// Random probability vector of the given length.  Entries are at least
// `floor` (requires floor * dim <= 1) and sum to exactly 1 in double.
std::vector<double> random_spectrum(std::size_t dim, std::mt19937_64& g, double floor = 0.0);

} // namespace fidest::rng

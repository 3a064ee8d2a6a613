#pragma once

#include "fidest/densop.hpp"

namespace fidest {

// Classical reference values the simulated protocol is judged against.
// Root-fidelity convention throughout: F(rho1, rho2) = Tr sqrt(sqrt(rho1)
// rho2 sqrt(rho1)), which for commuting states reduces to Tr sqrt(rho1 rho2).

// General (Uhlmann) root fidelity; works for any pair.
double fidelity_uhlmann(const DensityOperator& rho1, const DensityOperator& rho2);

// Commuting-case shortcut Tr sqrt(rho1 rho2).  Throws NonCommutingError when
// the max-entry norm of [rho1, rho2] exceeds tol.
double fidelity_commuting(const DensityOperator& rho1, const DensityOperator& rho2,
                          double tol = 1e-8);

// Tr sqrt(rho) (the normalization lambda of the sqrt state).
double trace_sqrt(const DensityOperator& rho);

// A pair of states with its measured commutator norm.
struct OraclePair {
  DensityOperator rho1;
  DensityOperator rho2;
  double commutator_norm;
};

OraclePair make_oracle_pair(DensityOperator rho1, DensityOperator rho2);

} // namespace fidest

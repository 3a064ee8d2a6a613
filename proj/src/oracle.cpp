#include "fidest/oracle.hpp"

#include <cmath>

namespace fidest {

namespace {

void require_same_dim(const DensityOperator& a, const DensityOperator& b) {
  if (a.dim() != b.dim())
    throw FidestError(ErrorKind::DimensionMismatch, "fidelity: state dimensions differ");
}

} // namespace

double fidelity_uhlmann(const DensityOperator& rho1, const DensityOperator& rho2) {
  require_same_dim(rho1, rho2);
  ComplexMatrix r1 = matrix_sqrt_psd(rho1.matrix());
  // sqrt(rho1) rho2 sqrt(rho1) is Hermitian PSD; its sqrt's trace is the root fidelity
  ComplexMatrix inner = r1 * rho2.matrix() * r1;
  SpectralDecomposition s = spectral_decompose(inner, 1e-8);
  double f = 0.0;
  for (double w : s.eigenvalues) f += std::sqrt(std::max(w, 0.0));
  return f;
}

double fidelity_commuting(const DensityOperator& rho1, const DensityOperator& rho2, double tol) {
  require_same_dim(rho1, rho2);
  double norm = commutator_norm(rho1.matrix(), rho2.matrix());
  if (norm > tol)
    throw NonCommutingError(norm, tol,
                            "states do not commute: max-entry commutator norm " +
                                format_double(norm) + " exceeds tolerance " + format_double(tol));
  // [rho1, rho2] = 0 makes rho1 rho2 Hermitian PSD: Tr sqrt(rho1 rho2)
  ComplexMatrix prod = rho1.matrix() * rho2.matrix();
  // symmetrize away the residual commutator before decomposing
  ComplexMatrix sym = 0.5 * (prod + adjoint(prod));
  SpectralDecomposition s = spectral_decompose(sym, 1e-8);
  double f = 0.0;
  for (double w : s.eigenvalues) f += std::sqrt(std::max(w, 0.0));
  return f;
}

double trace_sqrt(const DensityOperator& rho) {
  SpectralDecomposition s = spectral_decompose(rho.matrix(), 1e-8);
  double t = 0.0;
  for (double w : s.eigenvalues) t += std::sqrt(std::max(w, 0.0));
  return t;
}

OraclePair make_oracle_pair(DensityOperator rho1, DensityOperator rho2) {
  double norm = commutator_norm(rho1.matrix(), rho2.matrix());
  return OraclePair{std::move(rho1), std::move(rho2), norm};
}

} // namespace fidest

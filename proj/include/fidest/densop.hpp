#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fidest/complex_matrix.hpp"

namespace fidest {

// Eigen-decomposition of a Hermitian matrix.  Eigenvalues are sorted in
// descending order; eigenvector k sits in column k of `eigenvectors`.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;

  // V diag(f(lambda)) V^dagger
  ComplexMatrix apply(const std::function<cplx(double)>& f) const;

  // rank-1 projector |v_k><v_k| for eigenvector k
  ComplexMatrix projector(std::size_t k) const;
};

// Density operator on N qubits (dim 2^N).  Construction validates:
// Hermitian within 1e-10 (max entry), eigenvalues >= -1e-10, trace within
// 1e-10 of 1, and that the dimension is a power of two.
class DensityOperator {
public:
  explicit DensityOperator(ComplexMatrix m);

  std::size_t qubits() const noexcept { return qubits_; }
  std::size_t dim() const noexcept { return m_.dim(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

private:
  std::size_t qubits_;
  ComplexMatrix m_;
};

// Unitary operator; construction validates U^dagger U = I within 1e-9.
class UnitaryOperator {
public:
  explicit UnitaryOperator(ComplexMatrix m);

  std::size_t dim() const noexcept { return m_.dim(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

private:
  ComplexMatrix m_;
};

// --- operations --------------------------------------------------------------

// Kronecker product a (x) b.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

// Trace out every subsystem not listed in keep.  dims: subsystem dimensions,
// slowest index first; keep: ascending subsystem indices to retain.
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep);

// Requires h Hermitian within tol (max entry).
SpectralDecomposition spectral_decompose(const ComplexMatrix& h, double tol = 1e-8);

// f applied on the spectrum: V diag(f(lambda)) V^dagger.
ComplexMatrix matrix_function(const ComplexMatrix& h, const std::function<cplx(double)>& f,
                              double tol = 1e-8);

// sqrt of a PSD matrix; eigenvalues below zero are clamped to zero first.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& h, double tol = 1e-8);

// e^{i h t} for Hermitian h.
UnitaryOperator evolution_unitary(const ComplexMatrix& h, double t, double tol = 1e-8);

// Swap operator on C^d (x) C^d: S |i,j> = |j,i>.
ComplexMatrix swap_operator(std::size_t d);

// 1/2 * trace norm of (a - b); both overloads require equal dims.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);
double trace_distance(const DensityOperator& a, const DensityOperator& b);

} // namespace fidest

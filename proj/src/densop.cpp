#include "fidest/densop.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

#include "fidest/kernels.hpp"

namespace fidest {

namespace {

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_hermitian(const ComplexMatrix& m, double tol, const char* what) {
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i; j < m.dim(); ++j)
      if (std::abs(m.at(i, j) - std::conj(m.at(j, i))) > tol)
        throw FidestError(ErrorKind::InvalidState,
                          std::string(what) + ": not Hermitian within " + format_double(tol));
}

} // namespace

ComplexMatrix SpectralDecomposition::apply(const std::function<cplx(double)>& f) const {
  const std::size_t n = eigenvectors.dim();
  // V diag(f) then multiply by V^dagger
  ComplexMatrix vf(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) vf.at(i, k) = eigenvectors.at(i, k) * f(eigenvalues[k]);
  return mul_adjoint(vf, eigenvectors);
}

ComplexMatrix SpectralDecomposition::projector(std::size_t k) const {
  const std::size_t n = eigenvectors.dim();
  if (k >= n) throw FidestError(ErrorKind::InvalidArgument, "projector index out of range");
  ComplexMatrix p(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      p.at(i, j) = eigenvectors.at(i, k) * std::conj(eigenvectors.at(j, k));
  return p;
}

SpectralDecomposition spectral_decompose(const ComplexMatrix& h, double tol) {
  require_hermitian(h, tol, "spectral_decompose");
  const std::size_t n = h.dim();
  // zheev works in place and returns ascending eigenvalues with eigenvector
  // k in column k; we flip to descending order
  ComplexMatrix v = h;
  // symmetrize so roundoff in the lower triangle cannot leak through
  for (std::size_t i = 0; i < n; ++i) {
    v.at(i, i) = cplx{v.at(i, i).real(), 0.0};
    for (std::size_t j = i + 1; j < n; ++j) {
      cplx avg = 0.5 * (v.at(i, j) + std::conj(v.at(j, i)));
      v.at(i, j) = avg;
      v.at(j, i) = std::conj(avg);
    }
  }
  std::vector<double> w(n);
  int info = LAPACKE_zheev(LAPACK_ROW_MAJOR, 'V', 'U', static_cast<lapack_int>(n),
                           reinterpret_cast<lapack_complex_double*>(v.data()),
                           static_cast<lapack_int>(n), w.data());
  if (info != 0)
    throw FidestError(ErrorKind::NumericalFailure,
                      "eigensolver failed with info=" + std::to_string(info));
  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = w[n - 1 - k];
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors.at(i, k) = v.at(i, n - 1 - k);
  }
  return out;
}

DensityOperator::DensityOperator(ComplexMatrix m) : m_(std::move(m)) {
  if (!power_of_two(m_.dim()))
    throw FidestError(ErrorKind::InvalidState,
                      "density operator dimension " + std::to_string(m_.dim()) +
                          " is not a power of two");
  qubits_ = 0;
  for (std::size_t d = m_.dim(); d > 1; d >>= 1) ++qubits_;
  require_hermitian(m_, 1e-10, "density operator");
  cplx t = trace(m_);
  if (std::abs(t - cplx{1.0, 0.0}) > 1e-10)
    throw FidestError(ErrorKind::InvalidState,
                      "density operator trace = " + format_double(t.real()) + " + " +
                          format_double(t.imag()) + "i, expected 1");
  SpectralDecomposition s = spectral_decompose(m_, 1e-9);
  if (s.eigenvalues.back() < -1e-10)
    throw FidestError(ErrorKind::InvalidState,
                      "density operator has negative eigenvalue " +
                          format_double(s.eigenvalues.back()));
}

UnitaryOperator::UnitaryOperator(ComplexMatrix m) : m_(std::move(m)) {
  ComplexMatrix g = mul_adjoint(m_, m_);
  if (max_abs_diff(g, ComplexMatrix::identity(m_.dim())) > 1e-9)
    throw FidestError(ErrorKind::InvalidState, "operator is not unitary within 1e-9");
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.dim() * b.dim());
  kern::kron(a.data(), a.dim(), b.data(), b.dim(), c.data());
  return c;
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(tensor(a.matrix(), b.matrix()));
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep) {
  if (dims.empty()) throw FidestError(ErrorKind::InvalidArgument, "partial_trace: empty dims");
  std::size_t full = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw FidestError(ErrorKind::InvalidArgument, "partial_trace: zero subsystem dim");
    full *= d;
  }
  if (full != m.dim())
    throw FidestError(ErrorKind::DimensionMismatch,
                      "partial_trace: dims product " + std::to_string(full) + " != matrix dim " +
                          std::to_string(m.dim()));
  if (keep.empty())
    throw FidestError(ErrorKind::InvalidArgument, "partial_trace: keep set must be non-empty");
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] >= dims.size())
      throw FidestError(ErrorKind::InvalidArgument, "partial_trace: keep index out of range");
    if (k > 0 && keep[k] <= keep[k - 1])
      throw FidestError(ErrorKind::InvalidArgument, "partial_trace: keep must be strictly ascending");
  }
  std::size_t kept = 1;
  for (std::size_t s : keep) kept *= dims[s];
  ComplexMatrix out(kept);
  kern::partial_trace(m.data(), dims, keep, out.data());
  return out;
}

ComplexMatrix matrix_function(const ComplexMatrix& h, const std::function<cplx(double)>& f,
                              double tol) {
  return spectral_decompose(h, tol).apply(f);
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& h, double tol) {
  return matrix_function(
      h, [](double x) { return cplx{std::sqrt(std::max(x, 0.0)), 0.0}; }, tol);
}

UnitaryOperator evolution_unitary(const ComplexMatrix& h, double t, double tol) {
  return UnitaryOperator(matrix_function(
      h, [t](double x) { return std::exp(cplx{0.0, x * t}); }, tol));
}

ComplexMatrix swap_operator(std::size_t d) {
  if (d == 0) throw FidestError(ErrorKind::InvalidArgument, "swap_operator: dim must be >= 1");
  ComplexMatrix s(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) s.at(i * d + j, j * d + i) = 1.0;
  return s;
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix diff = a - b;
  require_hermitian(diff, 1e-8, "trace_distance");
  SpectralDecomposition s = spectral_decompose(diff, 1e-8);
  double sum = 0.0;
  for (double w : s.eigenvalues) sum += std::abs(w);
  return 0.5 * sum;
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  return trace_distance(a.matrix(), b.matrix());
}

} // namespace fidest

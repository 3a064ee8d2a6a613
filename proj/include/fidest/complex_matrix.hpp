#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "fidest/error.hpp"

namespace fidest {

using cplx = std::complex<double>;

// Dense square complex matrix, row-major.  This is the workhorse value type;
// states and unitaries wrap it with their own invariants.
class ComplexMatrix {
public:
  ComplexMatrix() : dim_(0) {}

  // Zero matrix of the given dimension.
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, cplx{0.0, 0.0}) {
    if (dim == 0) throw FidestError(ErrorKind::InvalidArgument, "matrix dimension must be >= 1");
  }

  // From raw row-major data; checks shape and that every entry is finite.
  ComplexMatrix(std::size_t dim, std::vector<cplx> data);

  static ComplexMatrix identity(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return dim_ == 0; }

  cplx& at(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  const cplx& at(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

  cplx* data() noexcept { return a_.data(); }
  const cplx* data() const noexcept { return a_.data(); }

  bool operator==(const ComplexMatrix& o) const { return dim_ == o.dim_ && a_ == o.a_; }

private:
  std::size_t dim_;
  std::vector<cplx> a_;
};

// --- arithmetic helpers -----------------------------------------------------

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b); // matrix product
ComplexMatrix operator*(cplx s, const ComplexMatrix& a);

ComplexMatrix adjoint(const ComplexMatrix& a);

// a * adjoint(b), fused (used for conjugations U X U^dagger)
ComplexMatrix mul_adjoint(const ComplexMatrix& a, const ComplexMatrix& b);

cplx trace(const ComplexMatrix& a);

double max_abs(const ComplexMatrix& a);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

bool is_hermitian(const ComplexMatrix& a, double tol);

// max-entry norm of [a,b] = ab - ba
double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b);

// --- text format ------------------------------------------------------------
//
// Line 1: dimension d.  Then d lines, each with d whitespace-separated entries
// of the form "re,im" printed with %.17g (bit-exact round trip).

void write_matrix(std::ostream& os, const ComplexMatrix& m);
ComplexMatrix read_matrix(std::istream& is);

void save_matrix(const std::string& path, const ComplexMatrix& m);
ComplexMatrix load_matrix(const std::string& path);

// %.17g formatting used across all text output (reports, CSV, matrices).
std::string format_double(double v);

} // namespace fidest

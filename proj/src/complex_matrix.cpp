#include "fidest/complex_matrix.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fidest/kernels.hpp"

namespace fidest {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.dim() != b.dim())
    throw FidestError(ErrorKind::DimensionMismatch,
                      std::string(what) + ": dimensions " + std::to_string(a.dim()) + " and " +
                          std::to_string(b.dim()));
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> data)
    : dim_(dim), a_(std::move(data)) {
  if (dim == 0) throw FidestError(ErrorKind::InvalidArgument, "matrix dimension must be >= 1");
  if (a_.size() != dim * dim)
    throw FidestError(ErrorKind::DimensionMismatch,
                      "matrix data size " + std::to_string(a_.size()) + " != dim^2 for dim " +
                          std::to_string(dim));
  for (const cplx& z : a_)
    if (!finite(z))
      throw FidestError(ErrorKind::InvalidState, "matrix entry is not finite");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "add");
  ComplexMatrix c(a.dim());
  for (std::size_t i = 0; i < a.dim() * a.dim(); ++i) c.data()[i] = a.data()[i] + b.data()[i];
  return c;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "sub");
  ComplexMatrix c(a.dim());
  for (std::size_t i = 0; i < a.dim() * a.dim(); ++i) c.data()[i] = a.data()[i] - b.data()[i];
  return c;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "matmul");
  ComplexMatrix c(a.dim());
  kern::matmul(a.data(), b.data(), c.data(), a.dim());
  return c;
}

ComplexMatrix operator*(cplx s, const ComplexMatrix& a) {
  ComplexMatrix c(a.dim());
  for (std::size_t i = 0; i < a.dim() * a.dim(); ++i) c.data()[i] = s * a.data()[i];
  return c;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) c.at(i, j) = std::conj(a.at(j, i));
  return c;
}

ComplexMatrix mul_adjoint(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "mul_adjoint");
  ComplexMatrix c(a.dim());
  kern::matmul_adjB(a.data(), b.data(), c.data(), a.dim());
  return c;
}

cplx trace(const ComplexMatrix& a) {
  cplx t = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) t += a.at(i, i);
  return t;
}

double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim() * a.dim(); ++i) m = std::max(m, std::abs(a.data()[i]));
  return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim() * a.dim(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i; j < a.dim(); ++j)
      if (std::abs(a.at(i, j) - std::conj(a.at(j, i))) > tol) return false;
  return true;
}

double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
  return max_abs_diff(a * b, b * a);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix(std::ostream& os, const ComplexMatrix& m) {
  os << m.dim() << "\n";
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (j) os << ' ';
      os << format_double(m.at(i, j).real()) << ',' << format_double(m.at(i, j).imag());
    }
    os << "\n";
  }
}

namespace {

double parse_real(const std::string& tok) {
  const char* s = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(s, &end);
  if (end == s || *end != '\0')
    throw FidestError(ErrorKind::ParseError, "bad numeric token '" + tok + "'");
  return v;
}

} // namespace

ComplexMatrix read_matrix(std::istream& is) {
  long long dim = 0;
  if (!(is >> dim)) throw FidestError(ErrorKind::ParseError, "missing matrix dimension line");
  if (dim < 1 || dim > 4096)
    throw FidestError(ErrorKind::ParseError, "matrix dimension out of range: " + std::to_string(dim));
  std::size_t d = static_cast<std::size_t>(dim);
  std::vector<cplx> data;
  data.reserve(d * d);
  std::string tok;
  for (std::size_t k = 0; k < d * d; ++k) {
    if (!(is >> tok))
      throw FidestError(ErrorKind::ParseError,
                        "matrix truncated: expected " + std::to_string(d * d) + " entries, got " +
                            std::to_string(k));
    auto comma = tok.find(',');
    if (comma == std::string::npos)
      throw FidestError(ErrorKind::ParseError, "matrix entry '" + tok + "' is not of the form re,im");
    data.emplace_back(parse_real(tok.substr(0, comma)), parse_real(tok.substr(comma + 1)));
  }
  return ComplexMatrix(d, std::move(data));
}

void save_matrix(const std::string& path, const ComplexMatrix& m) {
  std::ofstream f(path);
  if (!f) throw FidestError(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  write_matrix(f, m);
  if (!f.good()) throw FidestError(ErrorKind::IoError, "write failed for '" + path + "'");
}

ComplexMatrix load_matrix(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FidestError(ErrorKind::IoError, "cannot open '" + path + "'");
  return read_matrix(f);
}

} // namespace fidest

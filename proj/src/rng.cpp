#include "fidest/rng.hpp"

namespace fidest::rng {

ComplexMatrix ginibre(std::size_t dim, std::mt19937_64& g) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) m.at(i, j) = cplx{gauss(g), gauss(g)};
  return m;
}

ComplexMatrix haar_unitary(std::size_t dim, std::mt19937_64& g) {
  // Gram-Schmidt on Ginibre columns gives the Haar measure
  ComplexMatrix m = ginibre(dim, g);
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t prev = 0; prev < k; ++prev) {
      cplx ip{0.0, 0.0};
      for (std::size_t i = 0; i < dim; ++i) ip += std::conj(m.at(i, prev)) * m.at(i, k);
      for (std::size_t i = 0; i < dim; ++i) m.at(i, k) -= ip * m.at(i, prev);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < dim; ++i) norm += std::norm(m.at(i, k));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < dim; ++i) m.at(i, k) /= norm;
  }
  return m;
}

std::vector<double> random_spectrum(std::size_t dim, std::mt19937_64& g, double floor) {
  if (floor * static_cast<double>(dim) > 1.0)
    throw FidestError(ErrorKind::InvalidArgument, "random_spectrum: floor * dim exceeds 1");
  std::vector<double> s(dim);
  double sum = 0.0;
  for (double& v : s) {
    v = u01(g) + 1e-12; // keep strictly positive before normalization
    sum += v;
  }
  const double free_mass = 1.0 - floor * static_cast<double>(dim);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < dim; ++i) {
    s[i] = floor + free_mass * s[i] / sum;
    acc += s[i];
  }
  s[dim - 1] = 1.0 - acc; // exact unit sum in double
  return s;
}

} // namespace fidest::rng

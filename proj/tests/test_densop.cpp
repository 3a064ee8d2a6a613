#include <doctest.h>

#include <cmath>
#include <random>

#include "fidest/densop.hpp"
#include "fidest/rng.hpp"

using namespace fidest;

namespace {

ComplexMatrix diag2(double a, double b) {
  ComplexMatrix m(2);
  m.at(0, 0) = a;
  m.at(1, 1) = b;
  return m;
}

// Random density matrix: Haar-rotated random spectrum.
DensityOperator random_state(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  ComplexMatrix v = rng::haar_unitary(dim, g);
  std::vector<double> s = rng::random_spectrum(dim, g);
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      cplx acc{0.0, 0.0};
      for (std::size_t k = 0; k < dim; ++k)
        acc += s[k] * v.at(i, k) * std::conj(v.at(j, k));
      m.at(i, j) = acc;
    }
  return DensityOperator(ComplexMatrix(0.5 * (m + adjoint(m))));
}

} // namespace

TEST_CASE("density operator construction enforces the state invariants") {
  CHECK_NOTHROW(DensityOperator(diag2(0.3, 0.7)));

  // dimension 3 is not a power of two
  ComplexMatrix odd(3);
  for (std::size_t i = 0; i < 3; ++i) odd.at(i, i) = 1.0 / 3.0;
  CHECK_THROWS_AS(DensityOperator{odd}, FidestError);

  // non-Hermitian
  ComplexMatrix nh = diag2(0.5, 0.5);
  nh.at(0, 1) = cplx{0.2, 0.0};
  CHECK_THROWS_WITH_AS(DensityOperator{nh}, doctest::Contains("Hermitian"), FidestError);

  // wrong trace
  CHECK_THROWS_WITH_AS(DensityOperator(diag2(0.5, 0.6)), doctest::Contains("trace"),
                       FidestError);

  // negative eigenvalue
  CHECK_THROWS_WITH_AS(DensityOperator(diag2(1.2, -0.2)), doctest::Contains("negative"),
                       FidestError);

  CHECK(DensityOperator(diag2(0.5, 0.5)).qubits() == 1);
  CHECK(random_state(8, 5).qubits() == 3);
}

TEST_CASE("unitary operator construction rejects non-unitaries") {
  ComplexMatrix h(2);
  const double s = 1.0 / std::sqrt(2.0);
  h.at(0, 0) = s;
  h.at(0, 1) = s;
  h.at(1, 0) = s;
  h.at(1, 1) = -s;
  CHECK_NOTHROW(UnitaryOperator{h});
  CHECK_THROWS_AS(UnitaryOperator(diag2(1.0, 0.5)), FidestError);
}

TEST_CASE("spectral decomposition: descending order and exact reconstruction") {
  // sigma_x has eigenvalues +1, -1 with |+>, |-> eigenvectors
  ComplexMatrix sx(2);
  sx.at(0, 1) = 1.0;
  sx.at(1, 0) = 1.0;
  SpectralDecomposition s = spectral_decompose(sx);
  CHECK(s.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(std::abs(s.eigenvectors.at(0, 0)) - 1.0 / std::sqrt(2.0)) < 1e-12);

  for (std::size_t dim : {2u, 4u, 8u}) {
    DensityOperator rho = random_state(dim, 17 + dim);
    SpectralDecomposition d = spectral_decompose(rho.matrix());
    for (std::size_t k = 1; k < dim; ++k) CHECK(d.eigenvalues[k - 1] >= d.eigenvalues[k]);
    ComplexMatrix recon = d.apply([](double x) { return cplx{x, 0.0}; });
    CHECK(max_abs_diff(recon, rho.matrix()) < 1e-12);
    // projectors resolve the identity
    ComplexMatrix sum(dim);
    for (std::size_t k = 0; k < dim; ++k) sum = sum + d.projector(k);
    CHECK(max_abs_diff(sum, ComplexMatrix::identity(dim)) < 1e-12);
  }

  CHECK_THROWS_AS(spectral_decompose(ComplexMatrix(2), -1.0), FidestError);
}

TEST_CASE("matrix square root of a PSD matrix") {
  // frozen example: sqrt(diag(1/4, 3/4)) = diag(1/2, sqrt(3)/2)
  ComplexMatrix r = matrix_sqrt_psd(diag2(0.25, 0.75));
  CHECK(r.at(0, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.at(1, 1).real() == doctest::Approx(0.8660254037844386).epsilon(1e-14));

  // squaring the root returns the input, in a rotated basis too
  DensityOperator rho = random_state(4, 23);
  ComplexMatrix root = matrix_sqrt_psd(rho.matrix());
  CHECK(max_abs_diff(root * root, rho.matrix()) < 1e-12);
  CHECK(is_hermitian(root, 1e-12));
}

TEST_CASE("matrix_function applies f on the spectrum") {
  ComplexMatrix m = diag2(0.25, 0.75);
  ComplexMatrix e = matrix_function(m, [](double x) { return cplx{std::exp(x), 0.0}; });
  CHECK(e.at(0, 0).real() == doctest::Approx(std::exp(0.25)).epsilon(1e-14));
  CHECK(e.at(1, 1).real() == doctest::Approx(std::exp(0.75)).epsilon(1e-14));
  CHECK(std::abs(e.at(0, 1)) < 1e-15);
}

TEST_CASE("evolution unitary e^{iht}") {
  // diagonal generator: phases straight on the diagonal
  ComplexMatrix h = diag2(1.0, -0.5);
  UnitaryOperator u = evolution_unitary(h, 0.7);
  CHECK(std::abs(u.matrix().at(0, 0) - std::polar(1.0, 0.7)) < 1e-13);
  CHECK(std::abs(u.matrix().at(1, 1) - std::polar(1.0, -0.35)) < 1e-13);

  // group property e^{iht1} e^{iht2} = e^{ih(t1+t2)} for a dense generator
  DensityOperator rho = random_state(4, 31);
  ComplexMatrix u1 = evolution_unitary(rho.matrix(), 0.3).matrix();
  ComplexMatrix u2 = evolution_unitary(rho.matrix(), 1.1).matrix();
  ComplexMatrix u12 = evolution_unitary(rho.matrix(), 1.4).matrix();
  CHECK(max_abs_diff(u1 * u2, u12) < 1e-12);

  // t = 0 is the identity
  CHECK(max_abs_diff(evolution_unitary(rho.matrix(), 0.0).matrix(),
                     ComplexMatrix::identity(4)) < 1e-13);
}

TEST_CASE("swap operator exchanges tensor factors") {
  const std::size_t d = 3;
  ComplexMatrix s = swap_operator(d);
  // S|i,j> = |j,i>
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      CHECK(s.at(j * d + i, i * d + j) == cplx{1.0, 0.0});
  CHECK(max_abs_diff(s * s, ComplexMatrix::identity(d * d)) < 1e-15);

  std::mt19937_64 g(37);
  ComplexMatrix a = rng::ginibre(d, g), b = rng::ginibre(d, g);
  CHECK(max_abs_diff(s * tensor(a, b) * s, tensor(b, a)) < 1e-12);
}

TEST_CASE("partial trace of a Bell state is maximally mixed") {
  ComplexMatrix bell(4);
  // |phi+> = (|00> + |11>)/sqrt(2)
  bell.at(0, 0) = 0.5;
  bell.at(0, 3) = 0.5;
  bell.at(3, 0) = 0.5;
  bell.at(3, 3) = 0.5;
  for (std::size_t keep : {0u, 1u}) {
    ComplexMatrix red = partial_trace(bell, {2, 2}, {keep});
    CHECK(max_abs_diff(red, ComplexMatrix(0.5 * ComplexMatrix::identity(2))) < 1e-15);
  }
}

TEST_CASE("partial trace undoes tensor for product states") {
  DensityOperator a = random_state(2, 41);
  DensityOperator b = random_state(4, 42);
  DensityOperator ab = tensor(a, b);
  CHECK(max_abs_diff(partial_trace(ab.matrix(), {2, 4}, {0}), a.matrix()) < 1e-13);
  CHECK(max_abs_diff(partial_trace(ab.matrix(), {2, 4}, {1}), b.matrix()) < 1e-13);
}

TEST_CASE("partial trace validates its arguments") {
  ComplexMatrix m(4);
  CHECK_THROWS_AS(partial_trace(m, {2, 3}, {0}), FidestError);    // dims mismatch
  CHECK_THROWS_AS(partial_trace(m, {2, 2}, {}), FidestError);     // empty keep
  CHECK_THROWS_AS(partial_trace(m, {2, 2}, {2}), FidestError);    // index out of range
  CHECK_THROWS_AS(partial_trace(m, {2, 2}, {1, 0}), FidestError); // not ascending
}

TEST_CASE("trace distance") {
  // diagonal states: half the l1 distance of the spectra
  DensityOperator a(diag2(0.9, 0.1));
  DensityOperator b(diag2(0.4, 0.6));
  CHECK(trace_distance(a, b) == doctest::Approx(0.5).epsilon(1e-13));

  DensityOperator c = random_state(4, 51);
  CHECK(trace_distance(c, c) < 1e-14);

  // triangle inequality over random triples
  for (std::uint64_t seed = 60; seed < 65; ++seed) {
    DensityOperator x = random_state(4, seed);
    DensityOperator y = random_state(4, seed + 100);
    DensityOperator z = random_state(4, seed + 200);
    CHECK(trace_distance(x, z) <= trace_distance(x, y) + trace_distance(y, z) + 1e-12);
  }

  // orthogonal pure states are at maximal distance 1
  CHECK(trace_distance(DensityOperator(diag2(1.0, 0.0)), DensityOperator(diag2(0.0, 1.0))) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

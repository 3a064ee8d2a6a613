#include <doctest.h>

#include <cmath>
#include <random>

#include "fidest/oracle.hpp"
#include "fidest/pipeline.hpp"
#include "fidest/rng.hpp"

using namespace fidest;

namespace {

DensityOperator diag_state(std::initializer_list<double> spec) {
  ComplexMatrix m(spec.size());
  std::size_t i = 0;
  for (double v : spec) m.at(i, i) = v, ++i;
  return DensityOperator(std::move(m));
}

// rho -> U rho U^dagger for a Haar-random U
DensityOperator rotate(const DensityOperator& rho, const ComplexMatrix& u) {
  return DensityOperator(ComplexMatrix(u * mul_adjoint(rho.matrix(), u)));
}

} // namespace

TEST_CASE("fidelity of diagonal states reduces to sum of sqrt products") {
  // F(diag(.5,.5), diag(.8,.2)) = sqrt(.4) + sqrt(.1)
  const double want = std::sqrt(0.4) + std::sqrt(0.1);
  DensityOperator a = diag_state({0.5, 0.5});
  DensityOperator b = diag_state({0.8, 0.2});
  CHECK(fidelity_commuting(a, b) == doctest::Approx(want).epsilon(1e-14));
  CHECK(fidelity_uhlmann(a, b) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("fidelity is 1 for identical states and 0 for orthogonal supports") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    OraclePair p = generate_commuting_pair(seed, 2, PairKind::RandomSpectra);
    CHECK(fidelity_commuting(p.rho1, p.rho1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity_uhlmann(p.rho2, p.rho2) == doctest::Approx(1.0).epsilon(1e-10));
  }
  DensityOperator zero = diag_state({1.0, 0.0});
  DensityOperator one = diag_state({0.0, 1.0});
  CHECK(fidelity_commuting(zero, one) < 1e-12);
  CHECK(fidelity_uhlmann(zero, one) < 1e-7); // sqrt amplifies the eigensolver noise
}

TEST_CASE("fidelity is symmetric and unitarily invariant") {
  std::mt19937_64 g(99);
  for (std::uint64_t seed = 10; seed < 14; ++seed) {
    OraclePair p = generate_commuting_pair(seed, 2, PairKind::Thermal);
    const double f12 = fidelity_uhlmann(p.rho1, p.rho2);
    CHECK(fidelity_uhlmann(p.rho2, p.rho1) == doctest::Approx(f12).epsilon(1e-10));
    CHECK(fidelity_commuting(p.rho2, p.rho1) ==
          doctest::Approx(fidelity_commuting(p.rho1, p.rho2)).epsilon(1e-12));

    ComplexMatrix u = rng::haar_unitary(4, g);
    const double rot = fidelity_uhlmann(rotate(p.rho1, u), rotate(p.rho2, u));
    CHECK(rot == doctest::Approx(f12).epsilon(1e-10));
  }
}

TEST_CASE("commuting shortcut agrees with the Uhlmann form") {
  for (std::uint64_t seed = 20; seed < 30; ++seed) {
    for (PairKind kind : {PairKind::RandomSpectra, PairKind::Dephased, PairKind::Thermal}) {
      OraclePair p = generate_commuting_pair(seed, 1 + seed % 2, kind);
      const double fc = fidelity_commuting(p.rho1, p.rho2);
      const double fu = fidelity_uhlmann(p.rho1, p.rho2);
      CHECK(std::abs(fc - fu) < 1e-9);
      CHECK(fc >= 0.0);
      CHECK(fc <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("non-commuting pairs are rejected with the measured norm") {
  // |+><+| does not commute with a non-degenerate diagonal state
  ComplexMatrix plus(2);
  plus.at(0, 0) = 0.5;
  plus.at(0, 1) = 0.5;
  plus.at(1, 0) = 0.5;
  plus.at(1, 1) = 0.5;
  DensityOperator a{std::move(plus)};
  DensityOperator b = diag_state({0.8, 0.2});
  try {
    fidelity_commuting(a, b);
    FAIL("expected NonCommutingError");
  } catch (const NonCommutingError& e) {
    CHECK(e.kind() == ErrorKind::NonCommuting);
    CHECK(e.norm() > e.tolerance());
    CHECK(e.norm() == doctest::Approx(0.3).epsilon(1e-12)); // |[rho1,rho2]|_max = 0.5*0.6
  }
  // Uhlmann has no commutation requirement
  CHECK_NOTHROW(fidelity_uhlmann(a, b));
  // a loose tolerance lets the shortcut through (still a sane number)
  CHECK(fidelity_commuting(a, b, 1.0) <= 1.0 + 1e-9);
}

TEST_CASE("trace_sqrt known values") {
  CHECK(trace_sqrt(diag_state({0.5, 0.5})) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(trace_sqrt(diag_state({0.25, 0.25, 0.25, 0.25})) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(trace_sqrt(diag_state({0.25, 0.75})) ==
        doctest::Approx(0.5 + std::sqrt(0.75)).epsilon(1e-14));
  // pure state: Tr sqrt(rho) = 1
  CHECK(trace_sqrt(diag_state({1.0, 0.0})) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("make_oracle_pair records the commutator norm") {
  DensityOperator a = diag_state({0.25, 0.75});
  DensityOperator b = diag_state({0.5, 0.5});
  OraclePair p = make_oracle_pair(a, b);
  CHECK(p.commutator_norm == commutator_norm(a.matrix(), b.matrix()));
  CHECK(p.commutator_norm < 1e-15);
}

#include "fidest/lmr.hpp"

#include <cmath>

namespace fidest {

void validate(const LMRConfig& cfg) {
  if (cfg.steps < 1)
    throw FidestError(ErrorKind::InvalidArgument, "lmr: steps must be >= 1");
  if (!std::isfinite(cfg.total_time))
    throw FidestError(ErrorKind::InvalidArgument, "lmr: total_time must be finite");
}

namespace {

// One exact step of the channel on a raw matrix:
// X -> cos^2 X + i sin cos (PX - XP) + sin^2 Tr(X) P.  Trace-preserving.
ComplexMatrix step_channel(const ComplexMatrix& p, const ComplexMatrix& x, double dt) {
  const double c = std::cos(dt), s = std::sin(dt);
  ComplexMatrix px = p * x;
  ComplexMatrix xp = x * p;
  ComplexMatrix out(x.dim());
  const cplx isc{0.0, s * c};
  const cplx tr = trace(x);
  for (std::size_t i = 0; i < x.dim() * x.dim(); ++i)
    out.data()[i] = c * c * x.data()[i] + isc * (px.data()[i] - xp.data()[i]);
  for (std::size_t i = 0; i < x.dim() * x.dim(); ++i)
    out.data()[i] += s * s * tr * p.data()[i];
  return out;
}

} // namespace

DensityOperator lmr_step(const DensityOperator& rho, const DensityOperator& sigma, double dt) {
  if (rho.dim() != sigma.dim())
    throw FidestError(ErrorKind::DimensionMismatch, "lmr_step: state dimensions differ");
  if (!std::isfinite(dt))
    throw FidestError(ErrorKind::InvalidArgument, "lmr_step: dt must be finite");
  const std::size_t d = rho.dim();
  // explicit route: e^{i S dt} = cos(dt) I + i sin(dt) S since S^2 = I
  ComplexMatrix u = std::cos(dt) * ComplexMatrix::identity(d * d) +
                    cplx{0.0, std::sin(dt)} * swap_operator(d);
  ComplexMatrix joint = tensor(rho.matrix(), sigma.matrix());
  ComplexMatrix evolved = u * joint * adjoint(u);
  return DensityOperator(partial_trace(evolved, {d, d}, {1}));
}

DensityOperator lmr_evolve(const DensityOperator& rho, const DensityOperator& sigma,
                           LMRConfig& cfg) {
  validate(cfg);
  if (rho.dim() != sigma.dim())
    throw FidestError(ErrorKind::DimensionMismatch, "lmr_evolve: state dimensions differ");
  const double dt = cfg.total_time / static_cast<double>(cfg.steps);
  ComplexMatrix x = sigma.matrix();
  for (int k = 0; k < cfg.steps; ++k) x = step_channel(rho.matrix(), x, dt);
  cfg.copies_consumed += cfg.steps;
  return DensityOperator(std::move(x));
}

ComplexMatrix lmr_controlled_evolve(const DensityOperator& rho, const ComplexMatrix& joint,
                                    std::size_t T, double t, LMRConfig& cfg) {
  validate(cfg);
  if (T < 1) throw FidestError(ErrorKind::InvalidArgument, "lmr_controlled_evolve: T must be >= 1");
  const std::size_t d = rho.dim();
  if (joint.dim() != T * d)
    throw FidestError(ErrorKind::DimensionMismatch,
                      "lmr_controlled_evolve: joint dim != T * program dim");
  if (!std::isfinite(t))
    throw FidestError(ErrorKind::InvalidArgument, "lmr_controlled_evolve: t must be finite");

  SpectralDecomposition es = spectral_decompose(rho.matrix(), 1e-9);
  const std::vector<double>& phi = es.eigenvalues;

  // rotate the program subsystem into the eigenbasis of rho
  ComplexMatrix w = tensor(ComplexMatrix::identity(T), es.eigenvectors);
  ComplexMatrix j = adjoint(w) * joint * w;

  // per-step swap angle of branch iota
  std::vector<double> ca(T), sa(T);
  for (std::size_t i = 0; i < T; ++i) {
    double theta = t * static_cast<double>(i) / static_cast<double>(T) / static_cast<double>(cfg.steps);
    ca[i] = std::cos(theta);
    sa[i] = std::sin(theta);
  }

  const std::int64_t blocks = static_cast<std::int64_t>(T) * static_cast<std::int64_t>(T);
  for (int step = 0; step < cfg.steps; ++step) {
    // blocks evolve independently: exact per-block map
    // X -> cacb X + i sacb Phi X - i casb X Phi + sasb Tr(X) Phi
#pragma omp parallel for schedule(static) if (blocks >= 64)
    for (std::int64_t bl = 0; bl < blocks; ++bl) {
      const std::size_t bi = static_cast<std::size_t>(bl) / T, bj = static_cast<std::size_t>(bl) % T;
      const double cacb = ca[bi] * ca[bj], sacb = sa[bi] * ca[bj];
      const double casb = ca[bi] * sa[bj], sasb = sa[bi] * sa[bj];
      cplx tr{0.0, 0.0};
      for (std::size_t m = 0; m < d; ++m) tr += j.at(bi * d + m, bj * d + m);
      for (std::size_t m = 0; m < d; ++m) {
        for (std::size_t mp = 0; mp < d; ++mp) {
          const cplx coeff{cacb, sacb * phi[m] - casb * phi[mp]};
          cplx v = coeff * j.at(bi * d + m, bj * d + mp);
          if (m == mp) v += sasb * tr * phi[m];
          j.at(bi * d + m, bj * d + mp) = v;
        }
      }
    }
  }

  cfg.copies_consumed +=
      static_cast<long long>(cfg.steps) * (cfg.shared_register_reuse ? 1 : static_cast<long long>(T));
  return w * j * adjoint(w);
}

std::vector<cplx> block_trace_evolution(const std::vector<double>& phi, double theta_a,
                                        double theta_b, int steps) {
  const std::size_t d = phi.size();
  const double cacb = std::cos(theta_a) * std::cos(theta_b);
  const double sasb = std::sin(theta_a) * std::sin(theta_b);
  const double sdiff = std::sin(theta_a - theta_b);
  std::vector<cplx> w(d, cplx{1.0, 0.0});
  for (int k = 0; k < steps; ++k) {
    cplx dot{0.0, 0.0};
    for (std::size_t m = 0; m < d; ++m) dot += phi[m] * w[m];
    for (std::size_t m = 0; m < d; ++m)
      w[m] = cplx{cacb, phi[m] * sdiff} * w[m] + sasb * dot;
  }
  return w;
}

} // namespace fidest

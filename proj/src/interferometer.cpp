#include "fidest/interferometer.hpp"

#include <algorithm>
#include <cmath>

#include "fidest/sqrtprep.hpp"

namespace fidest {

namespace {

ComplexMatrix hadamard() {
  ComplexMatrix h(2);
  const double s = 1.0 / std::sqrt(2.0);
  h.at(0, 0) = s;
  h.at(0, 1) = s;
  h.at(1, 0) = s;
  h.at(1, 1) = -s;
  return h;
}

ComplexMatrix phase_gate(double phi) {
  ComplexMatrix p(2);
  p.at(0, 0) = 1.0;
  p.at(1, 1) = std::polar(1.0, phi);
  return p;
}

ComplexMatrix ctrl_block(int r, int c) {
  ComplexMatrix m(2);
  m.at(r, c) = 1.0;
  return m;
}

void require_generator(const DensityOperator& rho_prime, const ComplexMatrix& b) {
  if (b.dim() != rho_prime.dim())
    throw FidestError(ErrorKind::DimensionMismatch, "mzi: generator and state dims differ");
  if (!is_hermitian(b, 1e-8))
    throw FidestError(ErrorKind::InvalidState, "mzi: generator is not Hermitian");
}

} // namespace

double MZIResult::p0() const { return sigma.at(0, 0).real(); }

ComplexMatrix build_generator(const DensityOperator& sqrt_state) {
  // the sqrt state doubles as the evolution generator; as a state it is
  // exactly what the partial-swap synthesis can consume
  return sqrt_state.matrix();
}

MZIResult mzi_run(const DensityOperator& rho_prime, const ComplexMatrix& B, double tau,
                  double phi, MziMode mode, LMRConfig* lmr_cfg) {
  require_generator(rho_prime, B);
  if (!std::isfinite(tau) || !std::isfinite(phi))
    throw FidestError(ErrorKind::InvalidArgument, "mzi: tau and phi must be finite");
  const std::size_t d = rho_prime.dim();

  MZIResult res;
  res.tau = tau;
  res.phi = phi;
  res.mode = mode;

  if (mode == MziMode::Truncated) {
    // U = 1 - i tau B; interference blocks keep the raw coherence U rho',
    // the reflected block is renormalized so rho_f stays trace 1
    ComplexMatrix u = ComplexMatrix::identity(d) - cplx{0.0, tau} * B;
    ComplexMatrix urho = u * rho_prime.matrix();
    ComplexMatrix uru = mul_adjoint(urho, u);
    res.alpha = trace(urho);
    const double nu = trace(uru).real();
    ComplexMatrix plus = 0.5 * (ctrl_block(0, 0) + ctrl_block(0, 1) + ctrl_block(1, 0) + ctrl_block(1, 1));
    ComplexMatrix minus = 0.5 * (ctrl_block(0, 0) - ctrl_block(0, 1) - ctrl_block(1, 0) + ctrl_block(1, 1));
    ComplexMatrix mp = 0.5 * (ctrl_block(0, 0) + ctrl_block(1, 0) - ctrl_block(0, 1) - ctrl_block(1, 1));
    ComplexMatrix pm = adjoint(mp);
    res.rho_f = cplx{0.5, 0.0} * (tensor(plus, rho_prime.matrix()) +
                                  tensor(minus, (1.0 / nu) * uru) +
                                  std::polar(1.0, phi) * tensor(mp, urho) +
                                  std::polar(1.0, -phi) * tensor(pm, adjoint(urho)));
    res.sigma = partial_trace(res.rho_f, {2, d}, {0});
    res.physical = false;
    return res;
  }

  // exact and lmr modes run the actual circuit on |0><0| (x) rho'
  ComplexMatrix joint(2 * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) joint.at(i, j) = rho_prime.matrix().at(i, j);

  ComplexMatrix hi = tensor(hadamard(), ComplexMatrix::identity(d));
  ComplexMatrix pi = tensor(phase_gate(phi), ComplexMatrix::identity(d));
  joint = hi * joint * adjoint(hi);
  joint = pi * joint * adjoint(pi);

  ComplexMatrix u_exact = evolution_unitary(B, -tau).matrix();
  res.alpha = trace(u_exact * rho_prime.matrix());

  if (mode == MziMode::Exact) {
    ComplexMatrix cu = tensor(ctrl_block(0, 0), ComplexMatrix::identity(d)) +
                       tensor(ctrl_block(1, 1), u_exact);
    joint = cu * joint * adjoint(cu);
  } else {
    if (!lmr_cfg)
      throw FidestError(ErrorKind::InvalidArgument, "mzi: lmr mode needs an LMRConfig");
    // branch 1 of T=2 gets total time t*1/2 = -tau
    joint = lmr_controlled_evolve(DensityOperator(B), joint, 2, -2.0 * tau, *lmr_cfg);
  }

  joint = hi * joint * adjoint(hi);
  res.rho_f = std::move(joint);
  res.sigma = partial_trace(res.rho_f, {2, d}, {0});
  res.physical = true;
  return res;
}

VisibilityEstimate extract_visibility_spectral(const ComplexMatrix& sigma, const IQPEConfig& cfg,
                                               LMRConfig* lmr_cfg) {
  if (sigma.dim() != 2)
    throw FidestError(ErrorKind::InvalidArgument, "extract_visibility_spectral: sigma must be a qubit state");
  VisibilityEstimate est;
  try {
    DensityOperator s(sigma);
    std::vector<SpectrumBranch> spec = estimate_spectrum(s, cfg, lmr_cfg);
    est.lambda_plus = std::max(spec[0].phase_estimate, spec[1].phase_estimate);
    est.lambda_minus = std::min(spec[0].phase_estimate, spec[1].phase_estimate);
  } catch (const FidestError& e) {
    if (e.kind() != ErrorKind::InvalidState) throw;
    // truncated-mode sigma: one eigenvalue is slightly negative, phase
    // estimation does not apply; diagonalize directly
    SpectralDecomposition s = spectral_decompose(sigma, 1e-8);
    est.lambda_plus = s.eigenvalues[0];
    est.lambda_minus = s.eigenvalues[1];
    est.exact_fallback = true;
  }
  est.visibility = est.lambda_plus - est.lambda_minus;
  return est;
}

std::vector<double> default_phi_grid() { return {0.0, 0.5 * M_PI, M_PI}; }

FringeScan fringe_scan(const DensityOperator& rho_prime, const ComplexMatrix& B, double tau,
                       const std::vector<double>& phi_grid, MziMode mode, LMRConfig* lmr_cfg) {
  if (phi_grid.size() < 2)
    throw FidestError(ErrorKind::InvalidArgument, "fringe_scan: need at least two phase settings");

  FringeScan scan;
  scan.phi_grid = phi_grid;
  scan.p0_values.reserve(phi_grid.size());
  for (double phi : phi_grid) {
    MZIResult r = mzi_run(rho_prime, B, tau, phi, mode, lmr_cfg);
    scan.p0_values.push_back(r.p0());
  }

  // least squares for P(0; phi) = (1 + x cos phi - y sin phi)/2
  double scc = 0.0, sss = 0.0, scs = 0.0, scz = 0.0, ssz = 0.0;
  for (std::size_t j = 0; j < phi_grid.size(); ++j) {
    const double c = std::cos(phi_grid[j]), s = std::sin(phi_grid[j]);
    const double z = 2.0 * scan.p0_values[j] - 1.0;
    scc += c * c;
    sss += s * s;
    scs += c * s;
    scz += c * z;
    ssz += s * z;
  }
  const double det = scc * sss - scs * scs;
  if (std::abs(det) < 1e-12)
    throw FidestError(ErrorKind::InvalidArgument,
                      "fringe_scan: phase grid cannot resolve the fringe (degenerate fit)");
  const double x = (sss * scz - scs * ssz) / det;
  const double y = (scs * scz - scc * ssz) / det;
  scan.alpha = cplx{x, y};
  scan.visibility = std::abs(scan.alpha);
  scan.phase = std::atan2(y, x);
  scan.residual = 0.0;
  for (std::size_t j = 0; j < phi_grid.size(); ++j) {
    const double model =
        0.5 * (1.0 + x * std::cos(phi_grid[j]) - y * std::sin(phi_grid[j]));
    scan.residual = std::max(scan.residual, std::abs(model - scan.p0_values[j]));
  }
  return scan;
}

double recover_fidelity(double lambda1, double lambda2, double tau, MziMode mode, cplx alpha,
                        double visibility) {
  if (!std::isfinite(tau) || tau == 0.0)
    throw FidestError(ErrorKind::InvalidArgument, "recover_fidelity: tau must be finite and nonzero");
  if (lambda1 < 0.0 || lambda2 < 0.0)
    throw FidestError(ErrorKind::InvalidArgument, "recover_fidelity: negative lambda");
  double f = 0.0;
  if (mode == MziMode::Truncated) {
    if (visibility < 1.0 - 1e-12)
      throw FidestError(ErrorKind::ModeMismatch,
                        "recover_fidelity: visibility " + format_double(visibility) +
                            " < 1 is impossible for the truncated interferometer");
    const double v2 = std::max(visibility * visibility - 1.0, 0.0);
    f = lambda1 * lambda2 * std::sqrt(v2) / std::abs(tau);
  } else {
    f = lambda1 * lambda2 * std::abs(alpha.imag()) / std::abs(tau);
  }
  return std::clamp(f, 0.0, 1.05);
}

} // namespace fidest

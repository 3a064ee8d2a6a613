#include "fidest/sqrtprep.hpp"

#include <algorithm>
#include <cmath>

namespace fidest {

namespace {

DensityOperator maximally_mixed(std::size_t d) {
  ComplexMatrix m(d);
  for (std::size_t i = 0; i < d; ++i) m.at(i, i) = 1.0 / static_cast<double>(d);
  return DensityOperator(std::move(m));
}

ComplexMatrix rank_one(const std::vector<cplx>& v) {
  ComplexMatrix p(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) p.at(i, j) = v[i] * std::conj(v[j]);
  return p;
}

} // namespace

std::vector<SpectrumBranch> estimate_spectrum(const DensityOperator& rho, const IQPEConfig& cfg,
                                              LMRConfig* lmr_cfg) {
  IQPERun run = iqpe_run(rho.matrix(), maximally_mixed(rho.dim()), cfg, lmr_cfg);

  std::vector<SpectrumBranch> out;
  out.reserve(run.branches.size());
  std::vector<std::size_t> bins;
  double sum = 0.0;
  for (const IQPEBranch& b : run.branches) {
    PhaseDistribution bd{cfg.T, cfg.t, b.probs};
    Readout r = readout_argmax(bd);
    bins.push_back(r.q);
    SpectrumBranch s;
    s.phase_estimate = r.phase;
    s.weight = b.weight;
    s.projector = rank_one(b.vec);
    sum += s.phase_estimate;
    out.push_back(std::move(s));
  }

  // Bin 0 covers both eigenvalue 0 and eigenvalue 1 (the grid is a circle).
  // A unit-trace deficit of ~1 means exactly one q=0 branch really sits at
  // the top of the closed interval; promote the one whose true eigenvalue is
  // closest to 1.
  if (std::lround(1.0 - sum) == 1) {
    std::size_t best = out.size();
    double best_val = -1.0;
    for (std::size_t k = 0; k < out.size(); ++k)
      if (bins[k] == 0 && run.branches[k].omega_eigenvalue > best_val) {
        best = k;
        best_val = run.branches[k].omega_eigenvalue;
      }
    if (best < out.size()) out[best].phase_estimate = 1.0;
  }
  return out;
}

std::vector<SpectrumBranch> exact_spectrum(const DensityOperator& rho) {
  SpectralDecomposition s = spectral_decompose(rho.matrix(), 1e-9);
  const std::size_t d = rho.dim();
  std::vector<SpectrumBranch> out(d);
  for (std::size_t k = 0; k < d; ++k) {
    out[k].phase_estimate = std::clamp(s.eigenvalues[k], 0.0, 1.0);
    out[k].weight = 1.0 / static_cast<double>(d);
    out[k].projector = s.projector(k);
  }
  return out;
}

DensityOperator AncillaState::to_density() const {
  ComplexMatrix m(2);
  m.at(0, 0) = 1.0 - p;
  m.at(1, 1) = p;
  return DensityOperator(std::move(m));
}

SqrtPrepResult rotate_and_postselect(const std::vector<SpectrumBranch>& spectrum,
                                     std::size_t dim, int z) {
  if (spectrum.empty())
    throw FidestError(ErrorKind::InvalidArgument, "rotate_and_postselect: empty spectrum");
  if (z < 2)
    throw FidestError(ErrorKind::InvalidArgument,
                      "rotate_and_postselect: need z >= 2 ancilla copies to dephase chi");
  double success = 0.0;
  for (const SpectrumBranch& s : spectrum) {
    if (s.phase_estimate > 1.0 + 1e-9)
      throw FidestError(ErrorKind::InvalidArgument,
                        "rotate_and_postselect: phase estimate " +
                            format_double(s.phase_estimate) + " exceeds 1");
    if (s.phase_estimate < -1e-9 || s.weight < 0.0)
      throw FidestError(ErrorKind::InvalidArgument,
                        "rotate_and_postselect: negative phase estimate or weight");
    success += s.weight * std::sqrt(std::clamp(s.phase_estimate, 0.0, 1.0));
  }
  if (success <= 0.0)
    throw FidestError(ErrorKind::InvalidState,
                      "rotate_and_postselect: post-selection never succeeds (all estimates 0)");

  const std::size_t d = spectrum.front().projector.dim();
  ComplexMatrix acc(d);
  for (const SpectrumBranch& s : spectrum) {
    const double amp = s.weight * std::sqrt(std::clamp(s.phase_estimate, 0.0, 1.0)) / success;
    if (amp == 0.0) continue;
    for (std::size_t i = 0; i < d * d; ++i) acc.data()[i] += amp * s.projector.data()[i];
  }

  SqrtPrepResult res{DensityOperator(std::move(acc)),
                     static_cast<double>(dim) * success,
                     success,
                     spectrum,
                     AncillaState{success, dim},
                     z,
                     false};
  return res;
}

LambdaEstimate estimate_lambda(const AncillaState& chi, const IQPEConfig& cfg,
                               LMRConfig* lmr_cfg) {
  if (chi.p < 0.0 || chi.p > 1.0)
    throw FidestError(ErrorKind::InvalidArgument, "estimate_lambda: ancilla population out of [0,1]");
  if (chi.source_dim < 1)
    throw FidestError(ErrorKind::InvalidArgument, "estimate_lambda: bad source dimension");
  // phase-estimate chi on its |1> eigenstate; the readout is p = lambda/d,
  // which never wraps (p <= 1/sqrt(d) < 1)
  ComplexMatrix one(2);
  one.at(1, 1) = 1.0;
  IQPERun run = iqpe_run(chi.to_density().matrix(), DensityOperator(std::move(one)), cfg, lmr_cfg);
  Readout r = readout_argmax(run.distribution);
  if (r.q == 0) return LambdaEstimate{0.0, true}; // p indistinguishable from 0 on this grid
  return LambdaEstimate{static_cast<double>(chi.source_dim) * r.phase, false};
}

SqrtPrepResult prepare_sqrt_state(const DensityOperator& rho, const IQPEConfig& spectrum_cfg,
                                  const IQPEConfig& lambda_cfg, int z, LMRConfig* lmr_cfg) {
  std::vector<SpectrumBranch> spectrum = estimate_spectrum(rho, spectrum_cfg, lmr_cfg);
  SqrtPrepResult res = rotate_and_postselect(spectrum, rho.dim(), z);
  LambdaEstimate lam = estimate_lambda(res.ancilla, lambda_cfg, lmr_cfg);
  res.lambda_estimate = lam.lambda;
  res.degenerate = lam.degenerate;
  return res;
}

} // namespace fidest

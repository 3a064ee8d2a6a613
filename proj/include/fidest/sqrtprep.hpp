#pragma once

#include <cstddef>
#include <vector>

#include "fidest/iqpe.hpp"

namespace fidest {

// Preparation of the square-root state sqrt(rho)/Tr sqrt(rho) from phase
// estimates of rho, plus the readout of the normalization lambda = Tr
// sqrt(rho) from the post-selection ancilla.

struct SpectrumBranch {
  double phase_estimate;   // estimated eigenvalue on the closed grid [0, 1]
  double weight;           // branch weight (population in the input)
  ComplexMatrix projector; // rank-1 projector onto the branch eigenvector
};

// IQPE spectrum of rho on the cfg grid: phase estimation with generator rho
// and the maximally mixed state on the target register, so every eigenvector
// shows up as one branch of weight 1/d.  The q = 0 bin is ambiguous at t = 2 pi
// (eigenvalue 1 wraps onto 0); when the summed estimates fall short of unit
// trace by ~1, the q = 0 branch whose true eigenvalue sits circle-closest
// to 1 is promoted to phase_estimate = 1.  Estimates are exact for on-grid
// spectra and within half a grid step otherwise.
std::vector<SpectrumBranch> estimate_spectrum(const DensityOperator& rho,
                                              const IQPEConfig& cfg,
                                              LMRConfig* lmr_cfg = nullptr);

// Spectrum taken from exact diagonalization instead of phase estimation
// (no grid error; used to isolate downstream stages).
std::vector<SpectrumBranch> exact_spectrum(const DensityOperator& rho);

// Post-selection ancilla chi = (1 - p)|0><0| + p|1><1|.
struct AncillaState {
  double p = 0.0;              // population of |1>, equals Tr sqrt(rho) / d
  std::size_t source_dim = 2;  // dimension d of the state chi was distilled from

  DensityOperator to_density() const;
};

struct SqrtPrepResult {
  DensityOperator sqrt_state;          // sum_k sqrt(phi_k) P_k, normalized
  double lambda_estimate;              // Tr sqrt(rho): ideal d*p until estimate_lambda replaces it
  double success_probability;          // post-selection acceptance = sum_k sqrt(phi_k) w_k ... / 1 -> sum sqrt(phi)/d for maximally mixed input
  std::vector<SpectrumBranch> spectrum;
  AncillaState ancilla;
  int ancilla_copies;                  // z: ancilla copies traced to dephase chi
  bool degenerate = false;             // lambda readout collapsed to bin 0
};

// Controlled sqrt rotation + post-selection applied to the estimated
// spectrum, with the register fed the maximally mixed state (weights 1/d per
// branch).  Estimates are clamped to [0, 1] before the square root; an
// estimate above 1 + 1e-9 is rejected.  z >= 2 ancilla copies dephase chi.
SqrtPrepResult rotate_and_postselect(const std::vector<SpectrumBranch>& spectrum,
                                     std::size_t dim, int z = 2);

struct LambdaEstimate {
  double lambda = 0.0;
  bool degenerate = false; // readout hit bin 0: p indistinguishable from 0
};

// Reads lambda = Tr sqrt(rho) off the ancilla: phase estimation of chi on
// the |1> eigenstate returns p = lambda / d on the grid, scaled back by d.
// p <= 1/sqrt(d) < 1 always, so the readout never wraps.
LambdaEstimate estimate_lambda(const AncillaState& chi, const IQPEConfig& cfg,
                               LMRConfig* lmr_cfg = nullptr);

// Full stage driver: estimate_spectrum -> rotate_and_postselect ->
// estimate_lambda (lambda_estimate in the result is the measured one).
SqrtPrepResult prepare_sqrt_state(const DensityOperator& rho, const IQPEConfig& spectrum_cfg,
                                  const IQPEConfig& lambda_cfg, int z = 2,
                                  LMRConfig* lmr_cfg = nullptr);

} // namespace fidest

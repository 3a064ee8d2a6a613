#pragma once

#include <vector>

#include "fidest/iqpe.hpp"

namespace fidest {

// Mach-Zehnder stage.  The control qubit goes through H, a phase gate
// P(phi) = diag(1, e^{i phi}), a controlled-U with U = e^{-i tau B}, and a
// final H; the target register carries the state rho'.  The detection
// probability is P(0; phi) = (1 + Re(e^{i phi} alpha)) / 2 with the
// interference amplitude alpha = Tr(U rho').

enum class MziMode {
  Exact,     // controlled-e^{-i tau B} applied as an exact unitary
  Truncated, // U replaced by its first-order truncation 1 - i tau B
  Lmr,       // controlled evolution synthesized from partial-swap steps on B
};

struct MZIResult {
  ComplexMatrix rho_f;  // final joint state, control (x) target
  ComplexMatrix sigma;  // control reduced state = partial_trace(rho_f)
  cplx alpha;           // Tr(U rho') for the mode's U
  double tau = 0.0;
  double phi = 0.0;
  MziMode mode = MziMode::Exact;
  bool physical = true; // false in truncated mode: |alpha| >= 1 there, so
                        // sigma has a (small) negative eigenvalue

  double p0() const;    // P(control = 0)
};

// The controlled-evolution generator for the second state: its sqrt state's
// matrix (Hermitian PSD, trace 1).  In lmr mode the generator is consumed as
// partial-swap program copies, which is why it must itself be a state.
ComplexMatrix build_generator(const DensityOperator& sqrt_state);

// One interferometer shot at phase-gate setting phi.  In lmr mode the
// controlled-U comes from lmr_controlled_evolve on B (lmr_cfg required).
MZIResult mzi_run(const DensityOperator& rho_prime, const ComplexMatrix& B, double tau,
                  double phi, MziMode mode, LMRConfig* lmr_cfg = nullptr);

struct VisibilityEstimate {
  double visibility = 0.0;    // lambda_plus - lambda_minus
  double lambda_plus = 0.0;   // estimated sigma eigenvalues, (1 +/- V)/2
  double lambda_minus = 0.0;
  bool exact_fallback = false; // sigma was non-physical (truncated mode):
                               // eigenvalues from direct diagonalization
};

// Visibility from the spectrum of the control reduced state: phase
// estimation of sigma on the cfg grid (same top-bin promotion as
// estimate_spectrum), or exact diagonalization when sigma is not a density
// operator.
VisibilityEstimate extract_visibility_spectral(const ComplexMatrix& sigma,
                                               const IQPEConfig& cfg,
                                               LMRConfig* lmr_cfg = nullptr);

struct FringeScan {
  std::vector<double> phi_grid;
  std::vector<double> p0_values;
  cplx alpha;          // least-squares fit of P(0; phi) = (1 + Re(e^{i phi} alpha))/2
  double visibility;   // |alpha|
  double phase;        // arg(alpha): P(0; phi) = (1 + V cos(phi + phase))/2
  double residual;     // max |fit - data| over the grid
};

// Default scan grid {0, pi/2, pi}.
std::vector<double> default_phi_grid();

FringeScan fringe_scan(const DensityOperator& rho_prime, const ComplexMatrix& B, double tau,
                       const std::vector<double>& phi_grid, MziMode mode,
                       LMRConfig* lmr_cfg = nullptr);

// Fidelity readout.  Truncated mode inverts V^2 = 1 + (tau F / (l1 l2))^2
// (V < 1 is a mode mismatch); exact and lmr modes use F = l1 l2 |Im alpha| /
// tau.  The estimate is clamped to [0, 1.05] (grid slack).
double recover_fidelity(double lambda1, double lambda2, double tau, MziMode mode,
                        cplx alpha, double visibility);

} // namespace fidest

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fidest/densop.hpp"
#include "fidest/lmr.hpp"

namespace fidest {

// Phase estimation over a T-point register.  cfg.t is the evolution time per
// control increment: branch iota evolves under e^{i Omega t iota}, so bin q
// of the register estimates the generator eigenvalue 2 pi q / (t T).  With
// the default t = 2 pi the grid is simply q / T on the unit circle (an
// eigenvalue of exactly 1 wraps onto bin 0; see sqrtprep for how the
// spectrum-estimation layer disambiguates that).

enum class InitState {
  Uniform, // |+>^log T: exact bin concentration for on-grid eigenvalues
  A0,      // sine window sqrt(2/T) sum sin(pi(iota+1/2)/T)|iota>: better
           // worst-case confinement for off-grid eigenvalues
};

struct IQPEConfig {
  std::size_t T = 512;      // register size, power of two, >= 2
  double t = 2.0 * M_PI;    // per-increment evolution time
  InitState init = InitState::Uniform;
};

void validate(const IQPEConfig& cfg);

// Register amplitudes of the initial control state (size T, unit norm).
std::vector<cplx> prepare_init(std::size_t T, InitState init);

struct PhaseDistribution {
  std::size_t T = 0;
  double t = 2.0 * M_PI;
  std::vector<double> p; // size T, sums to 1

  double grid_value(std::size_t q) const { return 2.0 * M_PI * static_cast<double>(q) / (t * static_cast<double>(T)); }
};

struct Readout {
  std::size_t q;     // argmax bin (ties -> smaller q)
  double phase;      // grid_value(q)
  double mass;       // p[q]
};

Readout readout_argmax(const PhaseDistribution& dist);

// One eigenbranch of the run: the input state restricted to a joint
// eigenvector of (generator, input).
struct IQPEBranch {
  double weight;                // population of this eigenvector in the input
  double omega_eigenvalue;      // generator eigenvalue carried by the branch
  std::vector<cplx> vec;        // the eigenvector (dim d)
  std::vector<double> probs;    // register distribution given this branch (size T)
  std::vector<cplx> reg_amps;   // exact mode: post-QFT register amplitudes
  ComplexMatrix reg_density;    // lmr mode: register reduced state (T x T)
};

struct IQPERun {
  IQPEConfig cfg;
  bool lmr_mode = false;
  PhaseDistribution distribution;        // branch-weighted register statistics
  std::vector<IQPEBranch> branches;

  // Post-measurement ensemble sum_{q,k} w_k p_k(q) |q><q| (x) |v_k><v_k|.
  // (In lmr mode the target side is kept in its branch projector; the
  // register statistics are exact for the simulated channel.)
  ComplexMatrix measured_joint() const;

  // Pre-measurement joint state (exact mode only).
  ComplexMatrix joint() const;

  // Runs the inverse circuit on the pre-measurement state (exact mode only);
  // the result should equal init (x) input.
  ComplexMatrix uncompute_joint() const;
};

// Phase estimation of the Hermitian generator omega acting on the input
// state.  Joint eigenvectors are found by clustering omega's spectrum and
// re-diagonalizing the input inside each eigenspace, so degenerate
// subspaces are handled basis-independently.  The input must be diagonal in
// some joint eigenbasis of (omega, input) - i.e. commute with omega - or
// InvalidState is thrown.  When lmr_cfg is non-null the conditional
// evolution is the partial-swap channel from lmr.hpp (omega must then be a
// valid density operator) and the branch register states are full density
// matrices; otherwise the evolution is the exact conditional unitary.
IQPERun iqpe_run(const ComplexMatrix& omega, const DensityOperator& input,
                 const IQPEConfig& cfg, LMRConfig* lmr_cfg = nullptr);

} // namespace fidest

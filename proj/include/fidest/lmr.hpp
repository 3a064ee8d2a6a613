#pragma once

#include <cstdint>
#include <vector>

#include "fidest/densop.hpp"

namespace fidest {

// Density-matrix-exponentiation (partial-swap) simulation.  One step with a
// fresh program copy rho and swap angle dt applies the exact channel
//
//   E(X) = Tr_A[ e^{i S dt} (rho (x) X) e^{-i S dt} ]
//        = cos^2(dt) X + i sin(dt)cos(dt) [rho, X] + sin^2(dt) Tr(X) rho,
//
// which approximates e^{i rho dt} X e^{-i rho dt} to O(dt^2) per step.

struct LMRConfig {
  double total_time = 1.0;           // t: target evolution time for lmr_evolve
  int steps = 64;                    // n: partial-swap steps (fresh copies)
  bool shared_register_reuse = false; // controlled evolution: reuse one program
                                      // copy per step across all T branches
  long long copies_consumed = 0;     // running counter, incremented by calls
};

void validate(const LMRConfig& cfg);

// One exact partial-swap step: builds S on C^d (x) C^d, conjugates rho (x)
// sigma by e^{i S dt}, traces out the program copy.
DensityOperator lmr_step(const DensityOperator& rho, const DensityOperator& sigma, double dt);

// n steps of dt = t/n; approximates e^{i rho t} sigma e^{-i rho t}.
// Increments cfg.copies_consumed by cfg.steps.
DensityOperator lmr_evolve(const DensityOperator& rho, const DensityOperator& sigma,
                           LMRConfig& cfg);

// Conditional evolution on a joint state over C^T (x) C^d: control branch
// iota receives total swap angle t * iota / T, split over cfg.steps steps
// (per-step angles stay fixed across steps).  Implemented in the eigenbasis
// of rho with the closed-form per-block map, so it is the exact channel, not
// a sampled one.  Increments cfg.copies_consumed by cfg.steps when
// cfg.shared_register_reuse is set and by cfg.steps * T otherwise.
ComplexMatrix lmr_controlled_evolve(const DensityOperator& rho, const ComplexMatrix& joint,
                                    std::size_t T, double t, LMRConfig& cfg);

// Trace transport of the conditional map, used by the phase-estimation
// slicer.  For eigenvalues phi of rho and fixed per-step angles (theta_a,
// theta_b), evolves w <- D.w + sin(theta_a)sin(theta_b) (phi . w) 1 with
// D_m = cos(theta_a)cos(theta_b) + i phi_m sin(theta_a - theta_b), starting
// from w = 1, for `steps` steps.  Entry k of the result is the trace of the
// n-step evolved register block started at |k><k| in the eigenbasis.
std::vector<cplx> block_trace_evolution(const std::vector<double>& phi, double theta_a,
                                        double theta_b, int steps);

} // namespace fidest

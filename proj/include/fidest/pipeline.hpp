#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "fidest/interferometer.hpp"
#include "fidest/oracle.hpp"
#include "fidest/sqrtprep.hpp"

namespace fidest {

// End-to-end estimator: spectrum estimation of both inputs, sqrt-state
// preparation with post-selection, lambda readout, interferometer scan,
// fidelity recovery.  Everything is deterministic for a fixed config.

struct PipelineConfig {
  std::size_t T = 512;          // phase-estimation register size (all stages)
  double t1 = 2.0 * M_PI;       // per-increment time, input-spectrum stage
  double t3 = 2.0 * M_PI;       // per-increment time, lambda readout stage
  double tau = 0.01;            // interferometer evolution time
  MziMode mode = MziMode::Exact;
  InitState init = InitState::Uniform;
  int lmr_steps = 64;           // partial-swap steps per conditional evolution (lmr mode)
  bool shared_register_reuse = false;
  int ancilla_copies = 2;       // z
  double commutator_tol = 1e-8;
  double epsilon = 0.1;         // target accuracy, only feeds the resource formulas
  bool exact_sqrt_inputs = false; // bypass phase estimation: exact spectra and lambdas
};

void validate(const PipelineConfig& cfg);

struct ResourceLedger {
  long long copies_rho1 = 0;    // raw input copies consumed by the rho1 spectrum stage
  long long copies_rho2 = 0;    // same for rho2
  long long lmr_steps_total = 0; // conditional-swap steps across every stage
                                 // (spectra, lambda readouts, interferometer)
  int iqpe_register_bits = 0;
  double postselect_expected_repetitions = 0.0; // 1/p1 + 1/p2
  bool shared_register_reuse = false;
  // Asymptotic cost formulas evaluated with constant 1 at the configured
  // N (qubits) and epsilon, under t = 1/epsilon, n = ceil(t^2/epsilon).
  std::map<std::string, double> formula_values;
};

struct EstimationReport {
  PipelineConfig cfg;
  std::size_t dim = 0;
  double commutator_norm = 0.0;
  double oracle_fidelity = 0.0;   // Tr sqrt(rho1 rho2), classical reference
  double fidelity_estimate = 0.0; // the protocol's estimate
  double abs_error = 0.0;
  double lambda1 = 0.0, lambda2 = 0.0; // measured Tr sqrt(rho_i)
  double success_probability1 = 0.0, success_probability2 = 0.0;
  cplx alpha{0.0, 0.0};           // fringe-fit interference amplitude
  double fringe_visibility = 0.0; // |alpha|
  double spectral_visibility = 0.0; // from the sigma spectrum at phi = 0
  std::vector<std::pair<double, double>> spectrum1; // (phase_estimate, weight)
  std::vector<std::pair<double, double>> spectrum2;
  ResourceLedger ledger;
};

// Throws NonCommutingError when the inputs fail cfg.commutator_tol.
EstimationReport estimate_fidelity(const DensityOperator& rho1, const DensityOperator& rho2,
                                   const PipelineConfig& cfg);

// Canonical text serialization: "key = value" lines (17-significant-digit
// floats) followed by one machine-readable JSON line.  Byte-stable for a
// fixed report.
std::string report_to_string(const EstimationReport& report);
void write_report(std::ostream& os, const EstimationReport& report);

// --- commuting-pair generation ----------------------------------------------

enum class PairKind {
  RandomSpectra, // shared Haar eigenbasis, independent random spectra
  Dephased,      // diagonal in the computational basis
  Thermal,       // e^{-beta_i H}/Z for one random H and two temperatures
};

OraclePair generate_commuting_pair(std::uint64_t seed, std::size_t qubits, PairKind kind);

// --- resource accounting ------------------------------------------------------

// Ledger for a run that did not happen: fills the formula values and derived
// knobs (t = 1/eps, n = ceil(t^2/eps), register bits for the T that keeps the
// grid step below eps/2) without consuming any copies.
ResourceLedger resource_report(const PipelineConfig& cfg, std::size_t qubits, double epsilon);

} // namespace fidest

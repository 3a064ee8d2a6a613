#include "fidest/pipeline.hpp"

#include <json.hpp>

#include <cmath>
#include <ostream>
#include <sstream>

#include "fidest/rng.hpp"

namespace fidest {

void validate(const PipelineConfig& cfg) {
  if (cfg.T < 2 || (cfg.T & (cfg.T - 1)) != 0)
    throw FidestError(ErrorKind::InvalidArgument, "pipeline: T must be a power of two >= 2");
  if (!std::isfinite(cfg.tau) || cfg.tau == 0.0)
    throw FidestError(ErrorKind::InvalidArgument, "pipeline: tau must be finite and nonzero");
  if (!std::isfinite(cfg.t1) || cfg.t1 == 0.0 || !std::isfinite(cfg.t3) || cfg.t3 == 0.0)
    throw FidestError(ErrorKind::InvalidArgument, "pipeline: stage times must be finite and nonzero");
  if (cfg.lmr_steps < 1)
    throw FidestError(ErrorKind::InvalidArgument, "pipeline: lmr_steps must be >= 1");
  if (cfg.ancilla_copies < 2)
    throw FidestError(ErrorKind::InvalidArgument, "pipeline: ancilla_copies must be >= 2");
  if (!(cfg.commutator_tol > 0.0))
    throw FidestError(ErrorKind::InvalidArgument, "pipeline: commutator_tol must be positive");
  if (!(cfg.epsilon > 0.0) || cfg.epsilon > 1.0)
    throw FidestError(ErrorKind::InvalidArgument, "pipeline: epsilon must be in (0, 1]");
}

namespace {

LMRConfig stage_lmr(const PipelineConfig& cfg) {
  LMRConfig c;
  c.steps = cfg.lmr_steps;
  c.shared_register_reuse = cfg.shared_register_reuse;
  return c;
}

std::vector<std::pair<double, double>> spectrum_pairs(const std::vector<SpectrumBranch>& s) {
  std::vector<std::pair<double, double>> out;
  out.reserve(s.size());
  for (const SpectrumBranch& b : s) out.emplace_back(b.phase_estimate, b.weight);
  return out;
}

} // namespace

EstimationReport estimate_fidelity(const DensityOperator& rho1, const DensityOperator& rho2,
                                   const PipelineConfig& cfg) {
  validate(cfg);
  if (rho1.dim() != rho2.dim())
    throw FidestError(ErrorKind::DimensionMismatch, "estimate_fidelity: input dims differ");

  const double comm = commutator_norm(rho1.matrix(), rho2.matrix());
  if (comm > cfg.commutator_tol)
    throw NonCommutingError(comm, cfg.commutator_tol,
                            "estimate_fidelity: inputs do not commute (max-entry norm " +
                                format_double(comm) + ", tolerance " +
                                format_double(cfg.commutator_tol) + ")");

  EstimationReport rep;
  rep.cfg = cfg;
  rep.dim = rho1.dim();
  rep.commutator_norm = comm;
  rep.oracle_fidelity = fidelity_commuting(rho1, rho2, cfg.commutator_tol);

  const bool lmr = (cfg.mode == MziMode::Lmr);
  IQPEConfig spec_cfg{cfg.T, cfg.t1, cfg.init};
  IQPEConfig lam_cfg{cfg.T, cfg.t3, cfg.init};
  LMRConfig lmr_rho1 = stage_lmr(cfg), lmr_rho2 = stage_lmr(cfg);
  LMRConfig lmr_chi1 = stage_lmr(cfg), lmr_chi2 = stage_lmr(cfg);
  LMRConfig lmr_mzi = stage_lmr(cfg), lmr_sigma = stage_lmr(cfg);

  // stage 1-2: input spectra on the phase grid
  std::vector<SpectrumBranch> spec1 =
      cfg.exact_sqrt_inputs ? exact_spectrum(rho1)
                            : estimate_spectrum(rho1, spec_cfg, lmr ? &lmr_rho1 : nullptr);
  std::vector<SpectrumBranch> spec2 =
      cfg.exact_sqrt_inputs ? exact_spectrum(rho2)
                            : estimate_spectrum(rho2, spec_cfg, lmr ? &lmr_rho2 : nullptr);
  rep.spectrum1 = spectrum_pairs(spec1);
  rep.spectrum2 = spectrum_pairs(spec2);

  // stage 3: sqrt states via conditional rotation + post-selection
  SqrtPrepResult prep1 = rotate_and_postselect(spec1, rho1.dim(), cfg.ancilla_copies);
  SqrtPrepResult prep2 = rotate_and_postselect(spec2, rho2.dim(), cfg.ancilla_copies);
  rep.success_probability1 = prep1.success_probability;
  rep.success_probability2 = prep2.success_probability;

  // stage 4: normalization readout off the ancillas
  if (cfg.exact_sqrt_inputs) {
    rep.lambda1 = trace_sqrt(rho1);
    rep.lambda2 = trace_sqrt(rho2);
  } else {
    LambdaEstimate l1 = estimate_lambda(prep1.ancilla, lam_cfg, lmr ? &lmr_chi1 : nullptr);
    LambdaEstimate l2 = estimate_lambda(prep2.ancilla, lam_cfg, lmr ? &lmr_chi2 : nullptr);
    rep.lambda1 = l1.lambda;
    rep.lambda2 = l2.lambda;
  }

  // stage 5: interferometer
  const DensityOperator& rho_prime = prep1.sqrt_state;
  ComplexMatrix B = build_generator(prep2.sqrt_state);
  MZIResult shot0 = mzi_run(rho_prime, B, cfg.tau, 0.0, cfg.mode, lmr ? &lmr_mzi : nullptr);
  VisibilityEstimate vis =
      extract_visibility_spectral(shot0.sigma, spec_cfg, lmr ? &lmr_sigma : nullptr);
  rep.spectral_visibility = vis.visibility;

  FringeScan fringe = fringe_scan(rho_prime, B, cfg.tau, default_phi_grid(), cfg.mode,
                                  lmr ? &lmr_mzi : nullptr);
  rep.alpha = fringe.alpha;
  rep.fringe_visibility = fringe.visibility;

  rep.fidelity_estimate =
      recover_fidelity(rep.lambda1, rep.lambda2, cfg.tau, cfg.mode, fringe.alpha,
                       fringe.visibility);
  rep.abs_error = std::abs(rep.fidelity_estimate - rep.oracle_fidelity);

  // resource accounting
  rep.ledger = resource_report(cfg, rho1.qubits(), cfg.epsilon);
  rep.ledger.iqpe_register_bits = 0;
  for (std::size_t v = cfg.T; v > 1; v >>= 1) ++rep.ledger.iqpe_register_bits;
  rep.ledger.copies_rho1 = lmr_rho1.copies_consumed;
  rep.ledger.copies_rho2 = lmr_rho2.copies_consumed;
  rep.ledger.lmr_steps_total = lmr_rho1.copies_consumed + lmr_rho2.copies_consumed +
                               lmr_chi1.copies_consumed + lmr_chi2.copies_consumed +
                               lmr_mzi.copies_consumed + lmr_sigma.copies_consumed;
  rep.ledger.postselect_expected_repetitions =
      1.0 / prep1.success_probability + 1.0 / prep2.success_probability;
  return rep;
}

// --- serialization ------------------------------------------------------------

namespace {

const char* mode_name(MziMode m) {
  switch (m) {
    case MziMode::Exact: return "exact";
    case MziMode::Truncated: return "truncated";
    case MziMode::Lmr: return "lmr";
  }
  return "exact";
}

const char* init_name(InitState s) { return s == InitState::Uniform ? "uniform" : "a0"; }

std::string spectrum_field(const std::vector<std::pair<double, double>>& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ';';
    out += format_double(s[i].first);
    out += ':';
    out += format_double(s[i].second);
  }
  return out;
}

} // namespace

std::string report_to_string(const EstimationReport& rep) {
  std::ostringstream os;
  os << "fidest report v1\n";
  os << "mode = " << mode_name(rep.cfg.mode) << "\n";
  os << "dim = " << rep.dim << "\n";
  os << "T = " << rep.cfg.T << "\n";
  os << "t1 = " << format_double(rep.cfg.t1) << "\n";
  os << "t3 = " << format_double(rep.cfg.t3) << "\n";
  os << "tau = " << format_double(rep.cfg.tau) << "\n";
  os << "init = " << init_name(rep.cfg.init) << "\n";
  os << "lmr_steps = " << rep.cfg.lmr_steps << "\n";
  os << "shared_register_reuse = " << (rep.cfg.shared_register_reuse ? 1 : 0) << "\n";
  os << "ancilla_copies = " << rep.cfg.ancilla_copies << "\n";
  os << "exact_sqrt_inputs = " << (rep.cfg.exact_sqrt_inputs ? 1 : 0) << "\n";
  os << "commutator_tol = " << format_double(rep.cfg.commutator_tol) << "\n";
  os << "epsilon = " << format_double(rep.cfg.epsilon) << "\n";
  os << "commutator_norm = " << format_double(rep.commutator_norm) << "\n";
  os << "oracle_fidelity = " << format_double(rep.oracle_fidelity) << "\n";
  os << "fidelity_estimate = " << format_double(rep.fidelity_estimate) << "\n";
  os << "abs_error = " << format_double(rep.abs_error) << "\n";
  os << "lambda1 = " << format_double(rep.lambda1) << "\n";
  os << "lambda2 = " << format_double(rep.lambda2) << "\n";
  os << "success_probability1 = " << format_double(rep.success_probability1) << "\n";
  os << "success_probability2 = " << format_double(rep.success_probability2) << "\n";
  os << "alpha_re = " << format_double(rep.alpha.real()) << "\n";
  os << "alpha_im = " << format_double(rep.alpha.imag()) << "\n";
  os << "fringe_visibility = " << format_double(rep.fringe_visibility) << "\n";
  os << "spectral_visibility = " << format_double(rep.spectral_visibility) << "\n";
  os << "spectrum1 = " << spectrum_field(rep.spectrum1) << "\n";
  os << "spectrum2 = " << spectrum_field(rep.spectrum2) << "\n";
  os << "ledger.copies_rho1 = " << rep.ledger.copies_rho1 << "\n";
  os << "ledger.copies_rho2 = " << rep.ledger.copies_rho2 << "\n";
  os << "ledger.lmr_steps_total = " << rep.ledger.lmr_steps_total << "\n";
  os << "ledger.iqpe_register_bits = " << rep.ledger.iqpe_register_bits << "\n";
  os << "ledger.postselect_expected_repetitions = "
     << format_double(rep.ledger.postselect_expected_repetitions) << "\n";
  for (const auto& [key, value] : rep.ledger.formula_values)
    os << "ledger.formula." << key << " = " << format_double(value) << "\n";

  nlohmann::json j;
  j["mode"] = mode_name(rep.cfg.mode);
  j["dim"] = rep.dim;
  j["T"] = rep.cfg.T;
  j["tau"] = rep.cfg.tau;
  j["oracle_fidelity"] = rep.oracle_fidelity;
  j["fidelity_estimate"] = rep.fidelity_estimate;
  j["abs_error"] = rep.abs_error;
  j["lambda1"] = rep.lambda1;
  j["lambda2"] = rep.lambda2;
  j["alpha"] = {rep.alpha.real(), rep.alpha.imag()};
  j["fringe_visibility"] = rep.fringe_visibility;
  j["spectral_visibility"] = rep.spectral_visibility;
  j["success_probability"] = {rep.success_probability1, rep.success_probability2};
  nlohmann::json js1 = nlohmann::json::array(), js2 = nlohmann::json::array();
  for (const auto& [p, w] : rep.spectrum1) js1.push_back({p, w});
  for (const auto& [p, w] : rep.spectrum2) js2.push_back({p, w});
  j["spectrum1"] = js1;
  j["spectrum2"] = js2;
  j["ledger"] = {{"copies_rho1", rep.ledger.copies_rho1},
                 {"copies_rho2", rep.ledger.copies_rho2},
                 {"lmr_steps_total", rep.ledger.lmr_steps_total},
                 {"iqpe_register_bits", rep.ledger.iqpe_register_bits},
                 {"postselect_expected_repetitions", rep.ledger.postselect_expected_repetitions},
                 {"formula_values", rep.ledger.formula_values}};
  os << "json = " << j.dump() << "\n";
  return os.str();
}

void write_report(std::ostream& os, const EstimationReport& report) {
  os << report_to_string(report);
}

// --- commuting-pair generation ------------------------------------------------

OraclePair generate_commuting_pair(std::uint64_t seed, std::size_t qubits, PairKind kind) {
  if (qubits < 1 || qubits > 6)
    throw FidestError(ErrorKind::InvalidArgument, "generate_commuting_pair: qubits must be in [1, 6]");
  const std::size_t d = std::size_t{1} << qubits;
  std::mt19937_64 g(seed);

  auto assemble = [&](const ComplexMatrix& basis, const std::vector<double>& spec) {
    ComplexMatrix m(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < d; ++k)
          acc += spec[k] * basis.at(i, k) * std::conj(basis.at(j, k));
        m.at(i, j) = acc;
      }
    // symmetrize away roundoff so the pair commutes at machine precision
    return ComplexMatrix(0.5 * (m + adjoint(m)));
  };

  switch (kind) {
    case PairKind::Dephased: {
      ComplexMatrix m1(d), m2(d);
      std::vector<double> s1 = rng::random_spectrum(d, g);
      std::vector<double> s2 = rng::random_spectrum(d, g);
      for (std::size_t i = 0; i < d; ++i) {
        m1.at(i, i) = s1[i];
        m2.at(i, i) = s2[i];
      }
      return make_oracle_pair(DensityOperator(std::move(m1)), DensityOperator(std::move(m2)));
    }
    case PairKind::RandomSpectra: {
      ComplexMatrix v = rng::haar_unitary(d, g);
      std::vector<double> s1 = rng::random_spectrum(d, g);
      std::vector<double> s2 = rng::random_spectrum(d, g);
      return make_oracle_pair(DensityOperator(assemble(v, s1)), DensityOperator(assemble(v, s2)));
    }
    case PairKind::Thermal: {
      ComplexMatrix gmat = rng::ginibre(d, g);
      ComplexMatrix h = ComplexMatrix(0.5 * (gmat + adjoint(gmat)));
      SpectralDecomposition hs = spectral_decompose(h, 1e-8);
      const double beta1 = 1.0, beta2 = 0.5 + rng::u01(g);
      auto thermal = [&](double beta) {
        std::vector<double> spec(d);
        double z = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          spec[k] = std::exp(-beta * hs.eigenvalues[k]);
          z += spec[k];
        }
        for (double& s : spec) s /= z;
        return assemble(hs.eigenvectors, spec);
      };
      return make_oracle_pair(DensityOperator(thermal(beta1)), DensityOperator(thermal(beta2)));
    }
  }
  throw FidestError(ErrorKind::InvalidArgument, "generate_commuting_pair: unknown pair kind");
}

// --- resource accounting --------------------------------------------------------

ResourceLedger resource_report(const PipelineConfig& cfg, std::size_t qubits, double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw FidestError(ErrorKind::InvalidArgument, "resource_report: epsilon must be in (0, 1]");
  if (qubits < 1)
    throw FidestError(ErrorKind::InvalidArgument, "resource_report: qubits must be >= 1");
  const double N = static_cast<double>(qubits);
  const double t = 1.0 / epsilon;
  const double n = std::ceil(t * t / epsilon);
  // grid step 2 pi / (t T) <= epsilon / 2  =>  T >= 4 pi / (t epsilon) = 4 pi
  std::size_t treq = 2;
  while (2.0 * M_PI / (t * static_cast<double>(treq)) > 0.5 * epsilon) treq <<= 1;
  int bits = 0;
  for (std::size_t v = treq; v > 1; v >>= 1) ++bits;

  ResourceLedger led;
  led.shared_register_reuse = cfg.shared_register_reuse;
  const double per_spectrum = cfg.shared_register_reuse ? n : n * static_cast<double>(treq);
  led.copies_rho1 = static_cast<long long>(per_spectrum);
  led.copies_rho2 = static_cast<long long>(per_spectrum);
  led.lmr_steps_total = 2 * static_cast<long long>(per_spectrum);
  led.iqpe_register_bits = bits;
  led.formula_values["t"] = t;
  led.formula_values["n"] = n;
  led.formula_values["T"] = static_cast<double>(treq);
  led.formula_values["N*t^2/eps"] = N * t * t / epsilon;
  led.formula_values["N/eps^3"] = N / std::pow(epsilon, 3);
  led.formula_values["1/eps^3"] = 1.0 / std::pow(epsilon, 3);
  led.formula_values["N/eps^4"] = N / std::pow(epsilon, 4);
  led.formula_values["N^2/eps^7"] = N * N / std::pow(epsilon, 7);
  return led;
}

} // namespace fidest

// Acceptance gate for the fidelity-estimation stack.  Nine independent
// end-to-end properties; one [PASS]/[FAIL] line each; the exit code is the
// number of failures.  Everything here goes through public headers (plus the
// installed CLI binary for the determinism check) — no test doubles.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "fidest/lmr.hpp"
#include "fidest/pipeline.hpp"
#include "fidest/rng.hpp"

namespace {

using namespace fidest;

int g_failures = 0;

// Collects the first failing condition of a check; later requires are still
// evaluated but only the first message is reported.
struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& msg) {
    if (!cond && ok) {
      ok = false;
      detail = msg;
    }
  }
};

void run_check(const char* name, void (*body)(Check&)) {
  Check c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("unexpected exception: ") + e.what());
  }
  if (c.ok) {
    std::cout << "[PASS] " << name << "\n";
  } else {
    std::cout << "[FAIL] " << name << " — " << c.detail << "\n";
    ++g_failures;
  }
}

// rho = basis diag(spectrum) basis^dagger, symmetrized against rounding
DensityOperator assemble_state(const ComplexMatrix& basis, const std::vector<double>& spectrum) {
  const std::size_t d = basis.dim();
  ComplexMatrix m(d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        m.at(i, j) += spectrum[k] * basis.at(i, k) * std::conj(basis.at(j, k));
  return DensityOperator(0.5 * (m + adjoint(m)));
}

// normalized square-root state sqrt(rho) / Tr sqrt(rho)
DensityOperator sqrt_sigma(const DensityOperator& rho) {
  ComplexMatrix s = matrix_sqrt_psd(rho.matrix());
  const double lambda = trace(s).real();
  return DensityOperator(cplx{1.0 / lambda, 0.0} * s);
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

constexpr PairKind kKinds[] = {PairKind::RandomSpectra, PairKind::Dephased, PairKind::Thermal};

// --- 1. oracle consistency ---------------------------------------------------

void oracle_consistency(Check& c) {
  for (int seed = 0; seed < 100; ++seed) {
    const std::size_t qubits = 1 + static_cast<std::size_t>(seed % 2);
    OraclePair pair =
        generate_commuting_pair(static_cast<std::uint64_t>(seed + 1), qubits, kKinds[seed % 3]);
    const double fc = fidelity_commuting(pair.rho1, pair.rho2);
    const double fu = fidelity_uhlmann(pair.rho1, pair.rho2);
    const std::string tag = "seed " + std::to_string(seed + 1) + ": ";
    c.require(std::abs(fc - fu) <= 1e-9,
              tag + "|F_commuting - F_uhlmann| = " + format_double(std::abs(fc - fu)));
    c.require(fc >= 0.0 && fc <= 1.0 + 1e-9, tag + "F_commuting out of range: " + format_double(fc));
    c.require(fu >= 0.0 && fu <= 1.0 + 1e-9, tag + "F_uhlmann out of range: " + format_double(fu));
  }
}

// --- 2. truncated-mode fringe amplitude --------------------------------------

// With U = 1 - i tau B and exact square-root inputs the fitted amplitude obeys
// alpha = 1 - i tau Ftilde and |alpha|^2 = 1 + tau^2 Ftilde^2 exactly, where
// Ftilde = Tr(sigma1 sigma2).
void truncated_alpha_identities(Check& c) {
  const double tau = 0.01;
  for (int seed = 0; seed < 100; ++seed) {
    const std::size_t qubits = 1 + static_cast<std::size_t>(seed % 2);
    OraclePair pair =
        generate_commuting_pair(static_cast<std::uint64_t>(1000 + seed), qubits, kKinds[seed % 3]);
    DensityOperator s1 = sqrt_sigma(pair.rho1);
    DensityOperator s2 = sqrt_sigma(pair.rho2);
    const double ftilde = trace(s1.matrix() * s2.matrix()).real();

    FringeScan scan = fringe_scan(s1, s2.matrix(), tau, default_phi_grid(), MziMode::Truncated);
    const std::string tag = "seed " + std::to_string(1000 + seed) + ": ";
    c.require(std::abs(scan.alpha.real() - 1.0) <= 1e-12,
              tag + "Re alpha - 1 = " + format_double(scan.alpha.real() - 1.0));
    c.require(std::abs(scan.alpha.imag() + tau * ftilde) <= 1e-12,
              tag + "Im alpha + tau*Ftilde = " + format_double(scan.alpha.imag() + tau * ftilde));
    const double mod2 = std::norm(scan.alpha);
    const double expect = 1.0 + tau * tau * ftilde * ftilde;
    c.require(std::abs(mod2 - expect) <= 1e-12,
              tag + "|alpha|^2 - (1 + tau^2 Ftilde^2) = " + format_double(mod2 - expect));
  }
}

// --- 3. end-to-end estimates --------------------------------------------------

void end_to_end_exact_mode(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 g(42);
  PipelineConfig cfg; // exact mode, T = 512

  // spectra snapped to the register grid: every eigenvalue is some q/512, so
  // the spectrum stage is exact and only the lambda readout quantizes
  for (int i = 0; i < 25; ++i) {
    ComplexMatrix basis = rng::haar_unitary(2, g);
    auto snapped = [&g]() {
      const std::size_t q = 26 + static_cast<std::size_t>(rng::u01(g) * 461.0);
      return static_cast<double>(q) / 512.0;
    };
    const double p1 = snapped(), p2 = snapped();
    DensityOperator r1 = assemble_state(basis, {p1, 1.0 - p1});
    DensityOperator r2 = assemble_state(basis, {p2, 1.0 - p2});
    EstimationReport rep = estimate_fidelity(r1, r2, cfg);
    c.require(rep.abs_error <= 0.01, "snapped pair " + std::to_string(i) +
                                         ": |estimate - oracle| = " + format_double(rep.abs_error));
  }

  // free spectra (floored away from 0 and 1 so no eigenvalue straddles the
  // wrap-around bin): half-step rounding in every stage
  for (int i = 0; i < 25; ++i) {
    ComplexMatrix basis = rng::haar_unitary(2, g);
    DensityOperator r1 = assemble_state(basis, rng::random_spectrum(2, g, 0.05));
    DensityOperator r2 = assemble_state(basis, rng::random_spectrum(2, g, 0.05));
    EstimationReport rep = estimate_fidelity(r1, r2, cfg);
    c.require(rep.abs_error <= 0.05, "free pair " + std::to_string(i) +
                                         ": |estimate - oracle| = " + format_double(rep.abs_error));
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.require(seconds <= 300.0, "runtime " + format_double(seconds) + " s exceeds 300 s");
}

// --- 4. partial-swap error law -------------------------------------------------

void lmr_error_law(Check& c) {
  std::mt19937_64 g(7);
  // generic program/target pair (no shared eigenbasis): the full commutator
  // term is exercised, not just the drift part
  DensityOperator rho = assemble_state(rng::haar_unitary(4, g), rng::random_spectrum(4, g, 0.02));
  DensityOperator sigma = assemble_state(rng::haar_unitary(4, g), rng::random_spectrum(4, g, 0.02));
  const double t = 1.0;
  ComplexMatrix u = evolution_unitary(rho.matrix(), t).matrix();
  ComplexMatrix target = mul_adjoint(u * sigma.matrix(), u);

  std::vector<double> log_n, log_err;
  for (int n = 4; n <= 256; n *= 2) {
    LMRConfig cfg;
    cfg.total_time = t;
    cfg.steps = n;
    DensityOperator out = lmr_evolve(rho, sigma, cfg);
    const double err = trace_distance(out.matrix(), target);
    c.require(err > 0.0, "zero trace-distance error at n = " + std::to_string(n));
    if (err <= 0.0) return;
    log_n.push_back(std::log(static_cast<double>(n)));
    log_err.push_back(std::log(err));
  }
  const double slope = lsq_slope(log_n, log_err);
  c.require(slope >= -1.3 && slope <= -0.8,
            "log-log slope " + format_double(slope) + " outside [-1.3, -0.8]");
}

// --- 5. phase-estimation grid exactness ----------------------------------------

void iqpe_grid_exactness(Check& c) {
  const std::size_t T = 512;
  IQPEConfig cfg;
  cfg.T = T; // t = 2 pi, uniform init by default

  // diagonal generator whose eigenvalues all sit on the q/T grid
  const std::size_t bins[] = {0, 137, 256, 509};
  ComplexMatrix omega(4);
  for (std::size_t k = 0; k < 4; ++k)
    omega.at(k, k) = cplx{static_cast<double>(bins[k]) / static_cast<double>(T), 0.0};
  DensityOperator input(0.25 * ComplexMatrix::identity(4));

  IQPERun first = iqpe_run(omega, input, cfg);
  c.require(first.branches.size() == 4,
            "expected 4 branches, got " + std::to_string(first.branches.size()));
  for (const IQPEBranch& b : first.branches) {
    const std::size_t q =
        static_cast<std::size_t>(std::lround(b.omega_eigenvalue * static_cast<double>(T)));
    c.require(q < T && b.probs[q] >= 1.0 - 1e-9,
              "bin " + std::to_string(q) + " probability " + format_double(b.probs[q]));
    c.require(std::abs(b.weight - 0.25) <= 1e-12,
              "branch weight " + format_double(b.weight) + " != 1/4");
  }

  // bit-level determinism of a repeated run
  IQPERun second = iqpe_run(omega, input, cfg);
  c.require(first.distribution.p == second.distribution.p,
            "register distribution differs between runs");
  bool branches_equal = first.branches.size() == second.branches.size();
  for (std::size_t k = 0; branches_equal && k < first.branches.size(); ++k) {
    branches_equal = first.branches[k].weight == second.branches[k].weight &&
                     first.branches[k].omega_eigenvalue == second.branches[k].omega_eigenvalue &&
                     first.branches[k].probs == second.branches[k].probs;
  }
  c.require(branches_equal, "branch data differs between runs");
}

// --- 6./7. square-root state, lambda readout, post-selection --------------------

struct SqrtCase {
  DensityOperator rho;
  std::string tag;
};

std::vector<SqrtCase> sqrt_cases() {
  std::vector<SqrtCase> cases;
  // diagonal qubit, spectrum on every grid used below
  ComplexMatrix d2(2);
  d2.at(0, 0) = 0.25;
  d2.at(1, 1) = 0.75;
  cases.push_back({DensityOperator(d2), "diagonal qubit"});
  // rotated qubit
  std::mt19937_64 g(11);
  cases.push_back({assemble_state(rng::haar_unitary(2, g), {0.375, 0.625}), "rotated qubit"});
  // rotated two-qubit state, all four eigenvalues on the T = 512 grid
  cases.push_back(
      {assemble_state(rng::haar_unitary(4, g), {0.5, 0.25, 0.1875, 0.0625}), "rotated 4-dim"});
  return cases;
}

void sqrt_state_oracle_agreement(Check& c) {
  IQPEConfig spec_cfg; // T = 512: every case spectrum sits on this grid
  IQPEConfig lambda_cfg;
  lambda_cfg.T = 1024;

  for (const SqrtCase& sc : sqrt_cases()) {
    const double d = static_cast<double>(sc.rho.dim());
    SqrtPrepResult r = prepare_sqrt_state(sc.rho, spec_cfg, lambda_cfg);

    ComplexMatrix root = matrix_sqrt_psd(sc.rho.matrix());
    const double lambda = trace(root).real();
    DensityOperator reference(cplx{1.0 / lambda, 0.0} * root);
    const double td = trace_distance(r.sqrt_state, reference);
    c.require(td <= 1e-9, sc.tag + ": trace distance to sqrt(rho)/Tr sqrt(rho) = " + format_double(td));

    // lambda is read off the chi ancilla as d * (grid point); the estimate is
    // the nearest grid point, so the error is at most d * half a grid step
    const double bound = d / (2.0 * static_cast<double>(lambda_cfg.T)) + 1e-12;
    c.require(std::abs(r.lambda_estimate - lambda) <= bound,
              sc.tag + ": |lambda_est - Tr sqrt(rho)| = " +
                  format_double(std::abs(r.lambda_estimate - lambda)) + " > " + format_double(bound));
    c.require(!r.degenerate, sc.tag + ": lambda readout collapsed to bin 0");
  }
}

void postselection_accounting(Check& c) {
  IQPEConfig spec_cfg;
  IQPEConfig lambda_cfg;
  lambda_cfg.T = 1024;

  for (const SqrtCase& sc : sqrt_cases()) {
    const double d = static_cast<double>(sc.rho.dim());
    SqrtPrepResult r = prepare_sqrt_state(sc.rho, spec_cfg, lambda_cfg);
    const double expected = trace_sqrt(sc.rho) / d;
    c.require(std::abs(r.success_probability - expected) <= 1e-9,
              sc.tag + ": success probability " + format_double(r.success_probability) +
                  " != Tr sqrt(rho)/d = " + format_double(expected));
  }
}

// --- 8. sigma spectrum encodes the visibility -----------------------------------

void sigma_spectrum_visibility(Check& c) {
  const std::size_t T = 512;
  const double tau = 0.6;
  std::mt19937_64 g(99);

  for (int i = 0; i < 5; ++i) {
    ComplexMatrix basis = rng::haar_unitary(2, g);
    DensityOperator r1 = assemble_state(basis, rng::random_spectrum(2, g, 0.1));
    DensityOperator r2 = assemble_state(basis, rng::random_spectrum(2, g, 0.1));
    DensityOperator s1 = sqrt_sigma(r1);
    DensityOperator s2 = sqrt_sigma(r2);
    const std::string tag = "pair " + std::to_string(i) + ": ";

    MZIResult res = mzi_run(s1, s2.matrix(), tau, 0.0, MziMode::Exact);
    const double v = std::abs(res.alpha);
    SpectralDecomposition sd = spectral_decompose(res.sigma, 1e-9);
    c.require(std::abs(sd.eigenvalues[0] - 0.5 * (1.0 + v)) <= 1e-9,
              tag + "sigma eigenvalue " + format_double(sd.eigenvalues[0]) + " != (1+V)/2");
    c.require(std::abs(sd.eigenvalues[1] - 0.5 * (1.0 - v)) <= 1e-9,
              tag + "sigma eigenvalue " + format_double(sd.eigenvalues[1]) + " != (1-V)/2");

    IQPEConfig cfg;
    cfg.T = T;
    VisibilityEstimate ve = extract_visibility_spectral(res.sigma, cfg);
    c.require(!ve.exact_fallback, tag + "spectral readout fell back to diagonalization");
    const double sum = ve.lambda_plus + ve.lambda_minus;
    c.require(std::abs(sum - 1.0) <= 1.0 / static_cast<double>(T) + 1e-9,
              tag + "lambda_plus + lambda_minus = " + format_double(sum));

    FringeScan scan = fringe_scan(s1, s2.matrix(), tau, default_phi_grid(), MziMode::Exact);
    c.require(std::abs(ve.visibility - scan.visibility) <= 2.0 / static_cast<double>(T),
              tag + "|V_spectral - V_fringe| = " +
                  format_double(std::abs(ve.visibility - scan.visibility)));
  }
}

// --- 9. CLI determinism ----------------------------------------------------------

void cli_determinism(Check& c) {
  char tmpl[] = "/tmp/fidest_accept_XXXXXX";
  const char* dir = mkdtemp(tmpl);
  c.require(dir != nullptr, "mkdtemp failed");
  if (!dir) return;
  const std::string d(dir);
  const std::string cli = FIDEST_CLI_PATH;

  auto shell = [](const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };

  const std::string r1 = d + "/rho1.txt", r2 = d + "/rho2.txt";
  c.require(shell(cli + " gen --seed 21 --dim 4 --kind thermal " + r1 + " " + r2 +
                  " > /dev/null 2>&1") == 0,
            "gen exited nonzero");

  const std::string flags = " --T 256 --tau 0.02 --mode exact --out ";
  const int e1 = shell(cli + " estimate " + r1 + " " + r2 + flags + d + "/rep1.txt > /dev/null 2>&1");
  const int e2 = shell(cli + " estimate " + r1 + " " + r2 + flags + d + "/rep2.txt > /dev/null 2>&1");
  c.require(e1 == 0 && e2 == 0, "estimate exited nonzero");

  const std::string rep1 = slurp(d + "/rep1.txt");
  const std::string rep2 = slurp(d + "/rep2.txt");
  c.require(!rep1.empty(), "first report is empty");
  c.require(rep1 == rep2, "reports differ between identical runs");
}

} // namespace

int main() {
  run_check("1. oracle consistency over 100 seeded commuting pairs", oracle_consistency);
  run_check("2. truncated-mode fringe amplitude matches the first-order identities",
            truncated_alpha_identities);
  run_check("3. end-to-end exact-mode estimates within tolerance (snapped and free spectra)",
            end_to_end_exact_mode);
  run_check("4. partial-swap evolution error falls off as 1/n", lmr_error_law);
  run_check("5. phase estimation is exact and deterministic for on-grid eigenvalues",
            iqpe_grid_exactness);
  run_check("6. square-root state and lambda readout agree with the oracle on-grid",
            sqrt_state_oracle_agreement);
  run_check("7. post-selection success probability equals Tr sqrt(rho)/d",
            postselection_accounting);
  run_check("8. control-qubit spectrum encodes the fringe visibility", sigma_spectrum_visibility);
  run_check("9. estimate CLI reports are byte-identical across runs", cli_determinism);

  std::cout << (9 - g_failures) << "/9 acceptance checks passed\n";
  return g_failures;
}

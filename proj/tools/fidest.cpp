#include <CLI11.hpp>

#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "fidest/pipeline.hpp"

namespace {

using namespace fidest;

void apply_thread_env() {
  const char* env = std::getenv("FIDEST_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  long n = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || n < 1)
    throw FidestError(ErrorKind::InvalidArgument,
                      std::string("FIDEST_THREADS must be a positive integer, got '") + env + "'");
  omp_set_num_threads(static_cast<int>(n));
}

DensityOperator load_state(const std::string& path) {
  try {
    return DensityOperator(load_matrix(path));
  } catch (const FidestError& e) {
    throw FidestError(e.kind(), path + ": " + e.what());
  }
}

MziMode parse_mode(const std::string& s) {
  if (s == "exact") return MziMode::Exact;
  if (s == "truncated") return MziMode::Truncated;
  if (s == "lmr") return MziMode::Lmr;
  throw FidestError(ErrorKind::InvalidArgument, "unknown mode '" + s + "'");
}

InitState parse_init(const std::string& s) {
  if (s == "uniform") return InitState::Uniform;
  if (s == "a0") return InitState::A0;
  throw FidestError(ErrorKind::InvalidArgument, "unknown init state '" + s + "'");
}

PairKind parse_kind(const std::string& s) {
  if (s == "random") return PairKind::RandomSpectra;
  if (s == "dephased") return PairKind::Dephased;
  if (s == "thermal") return PairKind::Thermal;
  throw FidestError(ErrorKind::InvalidArgument, "unknown pair kind '" + s + "'");
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t comma = csv.find(',', pos);
    if (comma == std::string::npos) comma = csv.size();
    std::string tok = csv.substr(pos, comma - pos);
    if (tok.empty())
      throw FidestError(ErrorKind::InvalidArgument, "--values: empty entry");
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw FidestError(ErrorKind::InvalidArgument, "--values: bad number '" + tok + "'");
    vals.push_back(v);
    pos = comma + 1;
  }
  if (vals.empty()) throw FidestError(ErrorKind::InvalidArgument, "--values: no entries");
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i] <= vals[i - 1])
      throw FidestError(ErrorKind::InvalidArgument, "--values must be strictly ascending");
  return vals;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw FidestError(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  f << text;
  if (!f.good()) throw FidestError(ErrorKind::IoError, "write failed for '" + path + "'");
}

struct EstimateFlags {
  std::size_t T = 512;
  double tau = 0.01;
  double t1 = 2.0 * M_PI;
  double t3 = 2.0 * M_PI;
  std::string mode = "exact";
  std::string init = "uniform";
  int lmr_steps = 64;
  bool shared_register = false;
  int ancilla_copies = 2;
  double epsilon = 0.1;
  double commutator_tol = 1e-8;
  bool exact_sqrt = false;

  PipelineConfig to_config() const {
    PipelineConfig cfg;
    cfg.T = T;
    cfg.tau = tau;
    cfg.t1 = t1;
    cfg.t3 = t3;
    cfg.mode = parse_mode(mode);
    cfg.init = parse_init(init);
    cfg.lmr_steps = lmr_steps;
    cfg.shared_register_reuse = shared_register;
    cfg.ancilla_copies = ancilla_copies;
    cfg.epsilon = epsilon;
    cfg.commutator_tol = commutator_tol;
    cfg.exact_sqrt_inputs = exact_sqrt;
    return cfg;
  }
};

void add_estimate_flags(CLI::App* cmd, EstimateFlags& f) {
  cmd->add_option("--T", f.T, "phase-estimation register size (power of two)");
  cmd->add_option("--tau", f.tau, "interferometer evolution time");
  cmd->add_option("--t1", f.t1, "per-increment time, spectrum stage");
  cmd->add_option("--t3", f.t3, "per-increment time, lambda readout stage");
  cmd->add_option("--mode", f.mode, "exact | truncated | lmr");
  cmd->add_option("--init", f.init, "register init state: uniform | a0");
  cmd->add_option("--lmr-steps", f.lmr_steps, "partial-swap steps per conditional evolution");
  cmd->add_flag("--shared-register", f.shared_register, "count shared-register copy reuse");
  cmd->add_option("--ancilla-copies", f.ancilla_copies, "ancilla copies z (>= 2)");
  cmd->add_option("--epsilon", f.epsilon, "target accuracy for the resource formulas");
  cmd->add_option("--commutator-tol", f.commutator_tol, "max-entry commutator tolerance");
  cmd->add_flag("--exact-sqrt", f.exact_sqrt, "bypass phase estimation for spectra and lambdas");
}

int run(int argc, char** argv) {
  CLI::App app{"interferometric fidelity estimation for commuting states"};
  app.require_subcommand(1);

  // --- gen -------------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a commuting pair of states");
  std::uint64_t gen_seed = 1;
  std::size_t gen_dim = 2;
  std::string gen_kind = "random";
  std::string gen_out1, gen_out2;
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--dim", gen_dim, "state dimension (power of two)");
  gen->add_option("--kind", gen_kind, "random | dephased | thermal");
  gen->add_option("out1", gen_out1, "output file for rho1")->required();
  gen->add_option("out2", gen_out2, "output file for rho2")->required();

  // --- oracle ----------------------------------------------------------------
  auto* oracle = app.add_subcommand("oracle", "classical reference values for a pair");
  std::string or_rho1, or_rho2;
  double or_tol = 1e-8;
  oracle->add_option("rho1", or_rho1, "first state file")->required();
  oracle->add_option("rho2", or_rho2, "second state file")->required();
  oracle->add_option("--tol", or_tol, "commutator tolerance");

  // --- estimate --------------------------------------------------------------
  auto* est = app.add_subcommand("estimate", "run the full estimation pipeline");
  std::string est_rho1, est_rho2, est_out;
  EstimateFlags est_flags;
  est->add_option("rho1", est_rho1, "first state file")->required();
  est->add_option("rho2", est_rho2, "second state file")->required();
  add_estimate_flags(est, est_flags);
  est->add_option("--out", est_out, "also write the report to this file");

  // --- sweep -----------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "sweep one parameter, emit CSV");
  std::string sw_rho1, sw_rho2, sw_param, sw_values, sw_out;
  double sw_time = 1.0;
  EstimateFlags sw_flags;
  sweep->add_option("rho1", sw_rho1, "first state file")->required();
  sweep->add_option("rho2", sw_rho2, "second state file")->required();
  sweep->add_option("--param", sw_param, "n | T | tau")->required();
  sweep->add_option("--values", sw_values, "comma-separated ascending values")->required();
  sweep->add_option("--time", sw_time, "evolution time for the n-sweep error experiment");
  add_estimate_flags(sweep, sw_flags);
  sweep->add_option("--out", sw_out, "also write the CSV to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1; // --help exits 0, every parse failure is exit 1
  }

  if (gen->parsed()) {
    if (gen_dim < 2 || (gen_dim & (gen_dim - 1)) != 0 || gen_dim > 64)
      throw FidestError(ErrorKind::InvalidArgument, "--dim must be a power of two in [2, 64]");
    std::size_t qubits = 0;
    for (std::size_t v = gen_dim; v > 1; v >>= 1) ++qubits;
    OraclePair pair = generate_commuting_pair(gen_seed, qubits, parse_kind(gen_kind));
    save_matrix(gen_out1, pair.rho1.matrix());
    save_matrix(gen_out2, pair.rho2.matrix());
    std::cout << "dim = " << gen_dim << "\n"
              << "kind = " << gen_kind << "\n"
              << "seed = " << gen_seed << "\n"
              << "commutator_norm = " << format_double(pair.commutator_norm) << "\n"
              << "oracle_fidelity = "
              << format_double(fidelity_commuting(pair.rho1, pair.rho2)) << "\n";
    return 0;
  }

  if (oracle->parsed()) {
    DensityOperator r1 = load_state(or_rho1);
    DensityOperator r2 = load_state(or_rho2);
    double fc = fidelity_commuting(r1, r2, or_tol); // throws (exit 2) when non-commuting
    std::cout << "dim = " << r1.dim() << "\n"
              << "commutator_norm = "
              << format_double(commutator_norm(r1.matrix(), r2.matrix())) << "\n"
              << "fidelity_commuting = " << format_double(fc) << "\n"
              << "fidelity_uhlmann = " << format_double(fidelity_uhlmann(r1, r2)) << "\n"
              << "trace_sqrt_rho1 = " << format_double(trace_sqrt(r1)) << "\n"
              << "trace_sqrt_rho2 = " << format_double(trace_sqrt(r2)) << "\n";
    return 0;
  }

  if (est->parsed()) {
    DensityOperator r1 = load_state(est_rho1);
    DensityOperator r2 = load_state(est_rho2);
    EstimationReport rep = estimate_fidelity(r1, r2, est_flags.to_config());
    std::string text = report_to_string(rep);
    std::cout << text;
    if (!est_out.empty()) write_text(est_out, text);
    return 0;
  }

  // sweep
  DensityOperator r1 = load_state(sw_rho1);
  DensityOperator r2 = load_state(sw_rho2);
  std::vector<double> values = parse_values(sw_values);
  if (sw_param != "n" && sw_param != "T" && sw_param != "tau")
    throw FidestError(ErrorKind::InvalidArgument, "--param must be one of n, T, tau");

  std::string csv = "parameter,value,error,oracle_fidelity,fidelity_estimate,copies\n";
  for (double v : values) {
    PipelineConfig cfg = sw_flags.to_config();
    long long copies = 0;
    double error = 0.0;
    if (sw_param == "n") {
      const long long n = static_cast<long long>(v);
      if (n < 1 || static_cast<double>(n) != v)
        throw FidestError(ErrorKind::InvalidArgument, "n values must be positive integers");
      cfg.lmr_steps = static_cast<int>(n);
      // direct channel-error experiment at this step count
      LMRConfig lcfg;
      lcfg.total_time = sw_time;
      lcfg.steps = static_cast<int>(n);
      DensityOperator approx = lmr_evolve(r1, r2, lcfg);
      ComplexMatrix u = evolution_unitary(r1.matrix(), sw_time).matrix();
      ComplexMatrix target = mul_adjoint(u * r2.matrix(), u);
      error = trace_distance(approx.matrix(), target);
      copies = lcfg.copies_consumed;
      EstimationReport rep = estimate_fidelity(r1, r2, cfg);
      csv += sw_param + "," + format_double(v) + "," + format_double(error) + "," +
             format_double(rep.oracle_fidelity) + "," + format_double(rep.fidelity_estimate) +
             "," + std::to_string(copies) + "\n";
      continue;
    }
    if (sw_param == "T") {
      const long long T = static_cast<long long>(v);
      if (T < 2 || static_cast<double>(T) != v)
        throw FidestError(ErrorKind::InvalidArgument, "T values must be integers >= 2");
      cfg.T = static_cast<std::size_t>(T);
    } else {
      cfg.tau = v;
    }
    EstimationReport rep = estimate_fidelity(r1, r2, cfg);
    error = rep.abs_error;
    copies = rep.ledger.lmr_steps_total;
    csv += sw_param + "," + format_double(v) + "," + format_double(error) + "," +
           format_double(rep.oracle_fidelity) + "," + format_double(rep.fidelity_estimate) + "," +
           std::to_string(copies) + "\n";
  }
  std::cout << csv;
  if (!sw_out.empty()) write_text(sw_out, csv);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  try {
    apply_thread_env();
    return run(argc, argv);
  } catch (const fidest::NonCommutingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fidest::FidestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

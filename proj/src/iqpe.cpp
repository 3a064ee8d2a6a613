#include "fidest/iqpe.hpp"

#include <algorithm>
#include <cmath>

namespace fidest {

void validate(const IQPEConfig& cfg) {
  if (cfg.T < 2 || (cfg.T & (cfg.T - 1)) != 0 || cfg.T > (1u << 20))
    throw FidestError(ErrorKind::InvalidArgument,
                      "iqpe: T must be a power of two in [2, 2^20], got " + std::to_string(cfg.T));
  if (!std::isfinite(cfg.t) || cfg.t == 0.0)
    throw FidestError(ErrorKind::InvalidArgument, "iqpe: t must be finite and nonzero");
}

std::vector<cplx> prepare_init(std::size_t T, InitState init) {
  if (T < 2) throw FidestError(ErrorKind::InvalidArgument, "prepare_init: T must be >= 2");
  std::vector<cplx> a(T);
  if (init == InitState::Uniform) {
    const double v = 1.0 / std::sqrt(static_cast<double>(T));
    for (auto& z : a) z = cplx{v, 0.0};
  } else {
    const double scale = std::sqrt(2.0 / static_cast<double>(T));
    for (std::size_t i = 0; i < T; ++i)
      a[i] = cplx{scale * std::sin(M_PI * (static_cast<double>(i) + 0.5) / static_cast<double>(T)),
                  0.0};
  }
  return a;
}

Readout readout_argmax(const PhaseDistribution& dist) {
  if (dist.p.empty())
    throw FidestError(ErrorKind::InvalidArgument, "readout_argmax: empty distribution");
  std::size_t best = 0;
  for (std::size_t q = 1; q < dist.p.size(); ++q)
    if (dist.p[q] > dist.p[best]) best = q; // ties resolve to the smaller bin
  return Readout{best, dist.grid_value(best), dist.p[best]};
}

namespace {

// Joint eigenbranches of (omega, input): cluster omega's spectrum, then
// diagonalize the input inside each eigenspace so degenerate subspaces get a
// basis the input is diagonal in.
struct Branch {
  double weight;
  double omega_eigenvalue;
  std::vector<cplx> vec;
};

std::vector<Branch> slice_branches(const ComplexMatrix& omega, const ComplexMatrix& input) {
  const std::size_t d = omega.dim();
  SpectralDecomposition os = spectral_decompose(omega, 1e-8);

  std::vector<Branch> branches;
  branches.reserve(d);
  std::size_t lo = 0;
  while (lo < d) {
    std::size_t hi = lo + 1;
    while (hi < d && std::abs(os.eigenvalues[hi - 1] - os.eigenvalues[hi]) <= 1e-9) ++hi;
    const std::size_t m = hi - lo;
    // input block in this eigenspace
    ComplexMatrix block(m);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) {
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j)
            acc += std::conj(os.eigenvectors.at(i, lo + r)) * input.at(i, j) *
                   os.eigenvectors.at(j, lo + c);
        block.at(r, c) = acc;
      }
    double cluster_value = 0.0;
    for (std::size_t k = lo; k < hi; ++k) cluster_value += os.eigenvalues[k];
    cluster_value /= static_cast<double>(m);
    SpectralDecomposition bs = spectral_decompose(block, 1e-7);
    for (std::size_t k = 0; k < m; ++k) {
      Branch b;
      b.weight = std::max(bs.eigenvalues[k], 0.0);
      b.omega_eigenvalue = cluster_value;
      b.vec.assign(d, cplx{0.0, 0.0});
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t r = 0; r < m; ++r)
          b.vec[i] += os.eigenvectors.at(i, lo + r) * bs.eigenvectors.at(r, k);
      branches.push_back(std::move(b));
    }
    lo = hi;
  }

  // the branches must reassemble the input, otherwise it has coherences
  // between distinct omega eigenspaces (it does not commute with omega)
  ComplexMatrix recon(d);
  for (const Branch& b : branches)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) recon.at(i, j) += b.weight * b.vec[i] * std::conj(b.vec[j]);
  if (max_abs_diff(recon, input) > 1e-9)
    throw FidestError(ErrorKind::InvalidState,
                      "iqpe: input state does not commute with the generator");
  return branches;
}

ComplexMatrix rank_one(const std::vector<cplx>& v) {
  ComplexMatrix p(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) p.at(i, j) = v[i] * std::conj(v[j]);
  return p;
}

} // namespace

ComplexMatrix IQPERun::measured_joint() const {
  const std::size_t T = cfg.T, d = branches.empty() ? 0 : branches.front().vec.size();
  ComplexMatrix out(T * d);
  for (const IQPEBranch& b : branches) {
    ComplexMatrix p = rank_one(b.vec);
    for (std::size_t q = 0; q < T; ++q) {
      const double w = b.weight * b.probs[q];
      if (w == 0.0) continue;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out.at(q * d + i, q * d + j) += w * p.at(i, j);
    }
  }
  return out;
}

ComplexMatrix IQPERun::joint() const {
  if (lmr_mode)
    throw FidestError(ErrorKind::InvalidArgument,
                      "iqpe: pre-measurement joint state is tracked in exact mode only");
  const std::size_t T = cfg.T, d = branches.empty() ? 0 : branches.front().vec.size();
  ComplexMatrix out(T * d);
  for (const IQPEBranch& b : branches) {
    ComplexMatrix p = rank_one(b.vec);
    for (std::size_t q = 0; q < T; ++q)
      for (std::size_t r = 0; r < T; ++r) {
        const cplx amp = b.weight * b.reg_amps[q] * std::conj(b.reg_amps[r]);
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j) out.at(q * d + i, r * d + j) += amp * p.at(i, j);
      }
  }
  return out;
}

ComplexMatrix IQPERun::uncompute_joint() const {
  if (lmr_mode)
    throw FidestError(ErrorKind::InvalidArgument,
                      "iqpe: uncompute is tracked in exact mode only");
  const std::size_t T = cfg.T, d = branches.empty() ? 0 : branches.front().vec.size();
  ComplexMatrix out(T * d);
  for (const IQPEBranch& b : branches) {
    // QFT back, then peel the conditional phases off
    std::vector<cplx> reg(T, cplx{0.0, 0.0});
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(T));
    for (std::size_t i = 0; i < T; ++i) {
      cplx acc{0.0, 0.0};
      for (std::size_t q = 0; q < T; ++q)
        acc += std::polar(inv_sqrt, 2.0 * M_PI * static_cast<double>(q * i % T) /
                                        static_cast<double>(T)) *
               b.reg_amps[q];
      reg[i] = acc * std::polar(1.0, -b.omega_eigenvalue * cfg.t * static_cast<double>(i));
    }
    ComplexMatrix p = rank_one(b.vec);
    for (std::size_t q = 0; q < T; ++q)
      for (std::size_t r = 0; r < T; ++r) {
        const cplx amp = b.weight * reg[q] * std::conj(reg[r]);
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j) out.at(q * d + i, r * d + j) += amp * p.at(i, j);
      }
  }
  return out;
}

IQPERun iqpe_run(const ComplexMatrix& omega, const DensityOperator& input, const IQPEConfig& cfg,
                 LMRConfig* lmr_cfg) {
  validate(cfg);
  if (omega.dim() != input.dim())
    throw FidestError(ErrorKind::DimensionMismatch, "iqpe: generator and input dims differ");
  if (lmr_cfg) {
    validate(*lmr_cfg);
    DensityOperator program(omega); // the partial-swap program must be a state
    (void)program;
  }

  const std::size_t T = cfg.T;
  std::vector<Branch> sliced = slice_branches(omega, input.matrix());
  std::vector<cplx> a = prepare_init(T, cfg.init);

  IQPERun run;
  run.cfg = cfg;
  run.lmr_mode = (lmr_cfg != nullptr);
  run.distribution.T = T;
  run.distribution.t = cfg.t;
  run.distribution.p.assign(T, 0.0);

  // twiddle table: tw[k] = e^{-2 pi i k / T}
  std::vector<cplx> tw(T);
  for (std::size_t k = 0; k < T; ++k)
    tw[k] = std::polar(1.0, -2.0 * M_PI * static_cast<double>(k) / static_cast<double>(T));

  if (!run.lmr_mode) {
    for (Branch& br : sliced) {
      IQPEBranch out;
      out.weight = br.weight;
      out.omega_eigenvalue = br.omega_eigenvalue;
      out.vec = std::move(br.vec);
      // conditional phases, then inverse QFT
      std::vector<cplx> v(T);
      for (std::size_t i = 0; i < T; ++i)
        v[i] = a[i] * std::polar(1.0, br.omega_eigenvalue * cfg.t * static_cast<double>(i));
      out.reg_amps.resize(T);
      out.probs.resize(T);
      const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(T));
      const std::int64_t Ts = static_cast<std::int64_t>(T);
#pragma omp parallel for schedule(static) if (Ts >= 256)
      for (std::int64_t q = 0; q < Ts; ++q) {
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < T; ++i)
          acc += tw[(static_cast<std::size_t>(q) * i) % T] * v[i];
        out.reg_amps[q] = inv_sqrt * acc;
        out.probs[q] = std::norm(out.reg_amps[q]);
      }
      for (std::size_t q = 0; q < T; ++q)
        run.distribution.p[q] += out.weight * out.probs[q];
      run.branches.push_back(std::move(out));
    }
    return run;
  }

  // --- partial-swap provider -------------------------------------------------
  //
  // In the joint eigenbasis every register block (iota, iota') of every branch
  // stays diagonal on the target side, so the whole conditional evolution
  // reduces to the trace transport of lmr.hpp: g[k](iota, iota') is the trace
  // of the evolved block for branch k, and the register reduced state of
  // branch k is R_k(iota, iota') = a_iota conj(a_iota') g[k](iota, iota').

  std::vector<double> phis(sliced.size());
  for (std::size_t k = 0; k < sliced.size(); ++k) phis[k] = sliced[k].omega_eigenvalue;

  // per-step swap angle of branch iota (per-increment time cfg.t)
  std::vector<double> theta(T);
  for (std::size_t i = 0; i < T; ++i)
    theta[i] = cfg.t * static_cast<double>(i) / static_cast<double>(lmr_cfg->steps);

  // every step burns one program copy; without register reuse each of the T
  // conditional branches needs its own run
  lmr_cfg->copies_consumed +=
      static_cast<long long>(lmr_cfg->steps) *
      static_cast<long long>(lmr_cfg->shared_register_reuse ? 1 : T);

  // g table over ordered pairs iota <= iota'
  const std::size_t npairs = T * (T + 1) / 2;
  std::vector<std::vector<cplx>> g(npairs);
  std::vector<std::pair<std::size_t, std::size_t>> pairs(npairs);
  {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < T; ++i)
      for (std::size_t j = i; j < T; ++j) pairs[idx++] = {i, j};
  }
  const std::int64_t np = static_cast<std::int64_t>(npairs);
#pragma omp parallel for schedule(static) if (np >= 512)
  for (std::int64_t pi = 0; pi < np; ++pi) {
    const auto [i, j] = pairs[static_cast<std::size_t>(pi)];
    g[static_cast<std::size_t>(pi)] =
        block_trace_evolution(phis, theta[i], theta[j], lmr_cfg->steps);
  }

  for (std::size_t k = 0; k < sliced.size(); ++k) {
    IQPEBranch out;
    out.weight = sliced[k].weight;
    out.omega_eigenvalue = sliced[k].omega_eigenvalue;
    out.vec = std::move(sliced[k].vec);
    out.reg_density = ComplexMatrix(T);
    {
      std::size_t idx = 0;
      for (std::size_t i = 0; i < T; ++i)
        for (std::size_t j = i; j < T; ++j) {
          const cplx val = a[i] * std::conj(a[j]) * g[idx][k];
          out.reg_density.at(i, j) = val;
          if (i != j) out.reg_density.at(j, i) = std::conj(val);
          ++idx;
        }
    }
    // p_q = <q| F^dagger R F |q> via the anti-diagonal sums
    // C(delta) = sum_iota R(iota, iota - delta)
    std::vector<cplx> c(2 * T - 1, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < T; ++i)
      for (std::size_t j = 0; j < T; ++j) {
        const std::ptrdiff_t delta = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j);
        c[static_cast<std::size_t>(delta + static_cast<std::ptrdiff_t>(T) - 1)] +=
            out.reg_density.at(i, j);
      }
    out.probs.assign(T, 0.0);
    const std::int64_t Ts = static_cast<std::int64_t>(T);
#pragma omp parallel for schedule(static) if (Ts >= 256)
    for (std::int64_t q = 0; q < Ts; ++q) {
      cplx acc{0.0, 0.0};
      for (std::int64_t delta = -(Ts - 1); delta <= Ts - 1; ++delta) {
        const std::size_t mod =
            static_cast<std::size_t>(((q * delta) % Ts + Ts) % Ts);
        acc += c[static_cast<std::size_t>(delta + Ts - 1)] * tw[mod];
      }
      out.probs[q] = std::max(acc.real(), 0.0) / static_cast<double>(T);
    }
    for (std::size_t q = 0; q < T; ++q)
      run.distribution.p[q] += out.weight * out.probs[q];
    run.branches.push_back(std::move(out));
  }
  return run;
}

} // namespace fidest

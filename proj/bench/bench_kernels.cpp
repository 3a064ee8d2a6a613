// Timings for the serial reference kernels vs their OpenMP twins, plus one
// composite phase-estimation workload.  The parallel kernels must agree with
// the references bit for bit, so the max |delta| column should print 0.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <vector>

#include "fidest/iqpe.hpp"
#include "fidest/kernels.hpp"
#include "fidest/rng.hpp"

using fidest::cplx;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn(); // warm up
  auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

double max_delta(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<cplx> random_buffer(std::size_t n, std::mt19937_64& g) {
  std::vector<cplx> v(n);
  for (auto& z : v) z = cplx{fidest::rng::u01(g) - 0.5, fidest::rng::u01(g) - 0.5};
  return v;
}

void row(const char* name, const char* size, double serial_ms, double par_ms, double delta) {
  std::printf("%-18s %-12s %10.3f %10.3f %8.2fx %10.2e\n", name, size, serial_ms, par_ms,
              serial_ms / par_ms, delta);
}

} // namespace

int main() {
  if (const char* env = std::getenv("FIDEST_THREADS"))
    if (long n = std::strtol(env, nullptr, 10); n >= 1) omp_set_num_threads(static_cast<int>(n));

  std::printf("threads: %d\n\n", omp_get_max_threads());
  std::printf("%-18s %-12s %10s %10s %9s %10s\n", "kernel", "size", "serial", "omp", "speedup",
              "max|delta|");
  std::printf("%-18s %-12s %10s %10s %9s %10s\n", "", "", "(ms)", "(ms)", "", "");

  std::mt19937_64 g(12345);

  for (std::size_t n : {64u, 128u, 256u}) {
    auto a = random_buffer(n * n, g), b = random_buffer(n * n, g);
    std::vector<cplx> c1(n * n), c2(n * n);
    const int reps = n <= 128 ? 20 : 5;
    double ts = time_ms([&] { fidest::kern::serial::matmul(a.data(), b.data(), c1.data(), n); }, reps);
    double tp = time_ms([&] { fidest::kern::par::matmul(a.data(), b.data(), c2.data(), n); }, reps);
    char size[32];
    std::snprintf(size, sizeof(size), "%zux%zu", n, n);
    row("matmul", size, ts, tp, max_delta(c1, c2));
  }

  for (std::size_t n : {128u, 256u}) {
    auto a = random_buffer(n * n, g), b = random_buffer(n * n, g);
    std::vector<cplx> c1(n * n), c2(n * n);
    double ts = time_ms([&] { fidest::kern::serial::matmul_adjB(a.data(), b.data(), c1.data(), n); }, 10);
    double tp = time_ms([&] { fidest::kern::par::matmul_adjB(a.data(), b.data(), c2.data(), n); }, 10);
    char size[32];
    std::snprintf(size, sizeof(size), "%zux%zu", n, n);
    row("matmul_adjB", size, ts, tp, max_delta(c1, c2));
  }

  {
    const std::size_t na = 32, nb = 32, n = na * nb;
    auto a = random_buffer(na * na, g), b = random_buffer(nb * nb, g);
    std::vector<cplx> c1(n * n), c2(n * n);
    double ts = time_ms([&] { fidest::kern::serial::kron(a.data(), na, b.data(), nb, c1.data()); }, 10);
    double tp = time_ms([&] { fidest::kern::par::kron(a.data(), na, b.data(), nb, c2.data()); }, 10);
    row("kron", "32(x)32", ts, tp, max_delta(c1, c2));
  }

  {
    // trace out half of a 1024-dim bipartite system
    const std::vector<std::size_t> dims{32, 32};
    const std::vector<std::size_t> keep{0};
    auto m = random_buffer(1024 * 1024, g);
    std::vector<cplx> o1(32 * 32), o2(32 * 32);
    double ts = time_ms([&] { fidest::kern::serial::partial_trace(m.data(), dims, keep, o1.data()); }, 20);
    double tp = time_ms([&] { fidest::kern::par::partial_trace(m.data(), dims, keep, o2.data()); }, 20);
    row("partial_trace", "1024->32", ts, tp, max_delta(o1, o2));
  }

  {
    // composite: phase estimation with the partial-swap provider
    fidest::ComplexMatrix rho(4);
    rho.at(0, 0) = 0.4;
    rho.at(1, 1) = 0.3;
    rho.at(2, 2) = 0.2;
    rho.at(3, 3) = 0.1;
    fidest::DensityOperator state(rho);
    fidest::ComplexMatrix mixed(4);
    for (int i = 0; i < 4; ++i) mixed.at(i, i) = 0.25;
    fidest::DensityOperator input(mixed);
    fidest::IQPEConfig cfg;
    cfg.T = 256;
    fidest::LMRConfig lmr;
    lmr.steps = 32;
    auto runner = [&] {
      fidest::LMRConfig c = lmr;
      (void)fidest::iqpe_run(state.matrix(), input, cfg, &c);
    };
    int prev = omp_get_max_threads();
    omp_set_num_threads(1);
    double ts = time_ms(runner, 3);
    omp_set_num_threads(prev);
    double tp = time_ms(runner, 3);
    std::printf("%-18s %-12s %10.3f %10.3f %8.2fx %10s\n", "iqpe (lmr, T=256)", "d=4 n=32", ts, tp,
                ts / tp, "-");
  }

  return 0;
}

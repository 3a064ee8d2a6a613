#include "fidest/kernels.hpp"

#include <cstdint>

namespace fidest::kern {

namespace {

// Mixed-radix offset tables for the partial trace.  For the subsystems in
// `subs`, enumerate every digit combination (slowest subsystem first) and
// record its contribution to a flat row index of the full matrix.
std::vector<std::size_t> offset_table(const std::vector<std::size_t>& dims,
                                      const std::vector<std::size_t>& subs) {
  std::vector<std::size_t> stride(dims.size(), 1);
  for (std::size_t s = dims.size(); s-- > 1;) stride[s - 1] = stride[s] * dims[s];
  std::size_t count = 1;
  for (std::size_t s : subs) count *= dims[s];
  std::vector<std::size_t> offs(count, 0);
  std::size_t repeat = count;
  for (std::size_t s : subs) {
    repeat /= dims[s];
    std::size_t idx = 0;
    for (std::size_t block = 0; block < count / (dims[s] * repeat); ++block)
      for (std::size_t digit = 0; digit < dims[s]; ++digit)
        for (std::size_t r = 0; r < repeat; ++r) offs[idx++] += digit * stride[s];
  }
  return offs;
}

std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& keep) {
  std::vector<std::size_t> rest;
  std::size_t k = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (k < keep.size() && keep[k] == s) {
      ++k;
    } else {
      rest.push_back(s);
    }
  }
  return rest;
}

} // namespace

namespace serial {

void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    cplx* ci = c + i * n;
    for (std::size_t j = 0; j < n; ++j) ci[j] = cplx{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
      cplx aik = a[i * n + k];
      const cplx* bk = b + k * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
}

void matmul_adjB(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const cplx* ai = a + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      const cplx* bj = b + j * n;
      cplx acc{0.0, 0.0};
      for (std::size_t k = 0; k < n; ++k) acc += ai[k] * std::conj(bj[k]);
      c[i * n + j] = acc;
    }
  }
}

void kron(const cplx* a, std::size_t na, const cplx* b, std::size_t nb, cplx* c) {
  const std::size_t n = na * nb;
  for (std::size_t row = 0; row < n; ++row) {
    const std::size_t ia = row / nb, ib = row % nb;
    cplx* crow = c + row * n;
    for (std::size_t ja = 0; ja < na; ++ja) {
      cplx av = a[ia * na + ja];
      const cplx* brow = b + ib * nb;
      for (std::size_t jb = 0; jb < nb; ++jb) crow[ja * nb + jb] = av * brow[jb];
    }
  }
}

void partial_trace(const cplx* m, const std::vector<std::size_t>& dims,
                   const std::vector<std::size_t>& keep, cplx* out) {
  const std::vector<std::size_t> rest = complement(dims.size(), keep);
  const std::vector<std::size_t> kofs = offset_table(dims, keep);
  const std::vector<std::size_t> tofs = offset_table(dims, rest);
  std::size_t full = 1;
  for (std::size_t d : dims) full *= d;
  const std::size_t K = kofs.size();
  for (std::size_t ij = 0; ij < K * K; ++ij) {
    const std::size_t ri = kofs[ij / K], cj = kofs[ij % K];
    cplx acc{0.0, 0.0};
    for (std::size_t e : tofs) acc += m[(ri + e) * full + (cj + e)];
    out[ij] = acc;
  }
}

} // namespace serial

namespace par {

void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
  const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (nn >= 48)
  for (std::int64_t i = 0; i < nn; ++i) {
    cplx* ci = c + i * nn;
    for (std::int64_t j = 0; j < nn; ++j) ci[j] = cplx{0.0, 0.0};
    for (std::int64_t k = 0; k < nn; ++k) {
      cplx aik = a[i * nn + k];
      const cplx* bk = b + k * nn;
      for (std::int64_t j = 0; j < nn; ++j) ci[j] += aik * bk[j];
    }
  }
}

void matmul_adjB(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
  const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (nn >= 48)
  for (std::int64_t i = 0; i < nn; ++i) {
    const cplx* ai = a + i * nn;
    for (std::int64_t j = 0; j < nn; ++j) {
      const cplx* bj = b + j * nn;
      cplx acc{0.0, 0.0};
      for (std::int64_t k = 0; k < nn; ++k) acc += ai[k] * std::conj(bj[k]);
      c[i * nn + j] = acc;
    }
  }
}

void kron(const cplx* a, std::size_t na, const cplx* b, std::size_t nb, cplx* c) {
  const std::int64_t n = static_cast<std::int64_t>(na * nb);
#pragma omp parallel for schedule(static) if (n >= 128)
  for (std::int64_t row = 0; row < n; ++row) {
    const std::size_t ia = static_cast<std::size_t>(row) / nb, ib = static_cast<std::size_t>(row) % nb;
    cplx* crow = c + row * n;
    for (std::size_t ja = 0; ja < na; ++ja) {
      cplx av = a[ia * na + ja];
      const cplx* brow = b + ib * nb;
      for (std::size_t jb = 0; jb < nb; ++jb) crow[ja * nb + jb] = av * brow[jb];
    }
  }
}

void partial_trace(const cplx* m, const std::vector<std::size_t>& dims,
                   const std::vector<std::size_t>& keep, cplx* out) {
  const std::vector<std::size_t> rest = complement(dims.size(), keep);
  const std::vector<std::size_t> kofs = offset_table(dims, keep);
  const std::vector<std::size_t> tofs = offset_table(dims, rest);
  std::size_t full = 1;
  for (std::size_t d : dims) full *= d;
  const std::size_t K = kofs.size();
  const std::int64_t total = static_cast<std::int64_t>(K * K);
  // one output slot per iteration; the traced sum keeps a fixed order, so
  // this matches the serial kernel bit for bit
#pragma omp parallel for schedule(static) if (total >= 1024)
  for (std::int64_t ij = 0; ij < total; ++ij) {
    const std::size_t ri = kofs[static_cast<std::size_t>(ij) / K];
    const std::size_t cj = kofs[static_cast<std::size_t>(ij) % K];
    cplx acc{0.0, 0.0};
    for (std::size_t e : tofs) acc += m[(ri + e) * full + (cj + e)];
    out[ij] = acc;
  }
}

} // namespace par

} // namespace fidest::kern

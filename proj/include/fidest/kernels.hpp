#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace fidest::kern {

using cplx = std::complex<double>;

// Hot loops, shared by the whole library.  Each kernel exists twice: a plain
// serial reference in kern::serial and an OpenMP version in kern::par.  The
// parallel versions write disjoint output slots per iteration and keep every
// reduction in a fixed serial order, so both variants produce bit-identical
// results for the same input (the unit tests assert this).  The unqualified
// wrappers below dispatch to kern::par, whose pragmas carry if-clauses so
// small problems skip thread startup entirely.

namespace serial {

// C = A * B, n x n row-major
void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t n);

// C = A * B^dagger
void matmul_adjB(const cplx* a, const cplx* b, cplx* c, std::size_t n);

// C = A (x) B, dims na, nb -> na*nb
void kron(const cplx* a, std::size_t na, const cplx* b, std::size_t nb, cplx* c);

// Partial trace over the subsystems NOT listed in `keep` (sorted ascending).
// dims are the per-subsystem dimensions, slowest index first; m is the full
// (prod dims)^2 matrix; out must hold (prod kept dims)^2 entries.
void partial_trace(const cplx* m, const std::vector<std::size_t>& dims,
                   const std::vector<std::size_t>& keep, cplx* out);

} // namespace serial

namespace par {

void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t n);
void matmul_adjB(const cplx* a, const cplx* b, cplx* c, std::size_t n);
void kron(const cplx* a, std::size_t na, const cplx* b, std::size_t nb, cplx* c);
void partial_trace(const cplx* m, const std::vector<std::size_t>& dims,
                   const std::vector<std::size_t>& keep, cplx* out);

} // namespace par

inline void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
  par::matmul(a, b, c, n);
}
inline void matmul_adjB(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
  par::matmul_adjB(a, b, c, n);
}
inline void kron(const cplx* a, std::size_t na, const cplx* b, std::size_t nb, cplx* c) {
  par::kron(a, na, b, nb, c);
}
inline void partial_trace(const cplx* m, const std::vector<std::size_t>& dims,
                          const std::vector<std::size_t>& keep, cplx* out) {
  par::partial_trace(m, dims, keep, out);
}

} // namespace fidest::kern

#pragma once

// Variable-coefficient second-order operator on the periodic grid,
//   L phi = a phi_{z zb} + b phi_{zb zb} + c phi_{zb} + d phi,
// with the same stencils as d_zzb, d_zbzb and d_zb. This is the h-Laplacian
// for a Beltrami chart and, with d set, the Newton matvec of the Gauss solve.
//
// A scalar reference kernel and an AVX2+FMA kernel are provided; the AVX2
// one is picked at runtime when the CPU supports it.

#include "bct/grid.hpp"

namespace bct {

struct OpCoeffs {
  Field a, b, c, d;
};

enum class Kernel { Scalar, Avx2 };

bool avx2_available();
Kernel active_kernel();
// For tests and benchmarks. Forcing Avx2 on a CPU without it falls back.
void force_kernel(Kernel k);
void reset_kernel();

Field apply_operator(const OpCoeffs& op, const Field& phi);
Field apply_operator(const OpCoeffs& op, const Field& phi, Kernel k);
// Diagonal of L: -a/h^2 + d.
Field operator_diagonal(const OpCoeffs& op);

namespace detail {
struct KernelArgs {
  int n;
  const cd* phi;
  const cd* a;
  const cd* b;
  const cd* c;
  const cd* d;
  cd* out;
};
void op_rows_scalar(const KernelArgs& k, int j0, int j1);
void op_node_scalar(const KernelArgs& k, int i, int j);
#if defined(BCT_HAVE_AVX2_TU)
void op_rows_avx2(const KernelArgs& k, int j0, int j1);
#endif
}  // namespace detail

}  // namespace bct

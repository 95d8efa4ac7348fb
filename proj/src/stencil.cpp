#include "bct/stencil.hpp"

#include <atomic>

namespace bct {

namespace {

bool detect_avx2() {
#if defined(BCT_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<int> g_forced{-1};

}  // namespace

bool avx2_available() {
  static const bool ok = detect_avx2();
  return ok;
}

Kernel active_kernel() {
  int f = g_forced;
  if (f == static_cast<int>(Kernel::Scalar)) return Kernel::Scalar;
  return avx2_available() ? Kernel::Avx2 : Kernel::Scalar;
}

void force_kernel(Kernel k) { g_forced = static_cast<int>(k); }
void reset_kernel() { g_forced = -1; }

Field apply_operator(const OpCoeffs& op, const Field& phi) { return apply_operator(op, phi, active_kernel()); }

Field apply_operator(const OpCoeffs& op, const Field& phi, Kernel k) {
  Field out(phi.grid);
  detail::KernelArgs args{phi.n(), phi.data(), op.a.data(), op.b.data(), op.c.data(), op.d.data(), out.data()};
  bool simd = k == Kernel::Avx2 && avx2_available();
  parallel_rows(phi.n(), [&](int j0, int j1) {
#if defined(BCT_HAVE_AVX2_TU)
    if (simd) {
      detail::op_rows_avx2(args, j0, j1);
      return;
    }
#endif
    (void)simd;
    detail::op_rows_scalar(args, j0, j1);
  });
  return out;
}

Field operator_diagonal(const OpCoeffs& op) {
  const double n = op.a.n();
  Field out(op.a.grid);
  for (size_t q = 0; q < out.v.size(); ++q) out.v[q] = -op.a.v[q] * (n * n) + op.d.v[q];
  return out;
}

}  // namespace bct

#include <immintrin.h>

#include "bct/stencil.hpp"

namespace bct::detail {

namespace {

inline __m256d load2(const cd* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }

// (a+ib)(c+id) for two packed complex numbers.
inline __m256d cmul(__m256d x, __m256d y) {
  __m256d yr = _mm256_movedup_pd(y);
  __m256d yi = _mm256_permute_pd(y, 0xF);
  __m256d xs = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(x, yr, _mm256_mul_pd(xs, yi));
}

// i * x
inline __m256d times_i(__m256d x) {
  const __m256d sign = _mm256_set_pd(1.0, -1.0, 1.0, -1.0);
  return _mm256_mul_pd(_mm256_permute_pd(x, 0x5), sign);
}

}  // namespace

void op_rows_avx2(const KernelArgs& k, int j0, int j1) {
  const int n = k.n;
  const __m256d inv4h2 = _mm256_set1_pd(0.25 * n * n);
  const __m256d inv4h = _mm256_set1_pd(0.25 * n);
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d half = _mm256_set1_pd(0.5);

  for (int j = j0; j < j1; ++j) {
    const int jp = j + 1 == n ? 0 : j + 1, jm = j == 0 ? n - 1 : j - 1;
    const cd* row = k.phi + j * n;
    const cd* rn = k.phi + jp * n;
    const cd* rs = k.phi + jm * n;

    op_node_scalar(k, 0, j);
    int i = 1;
    for (; i + 1 < n - 1; i += 2) {
      __m256d C = load2(row + i);
      __m256d E = load2(row + i + 1), W = load2(row + i - 1);
      __m256d N = load2(rn + i), S = load2(rs + i);
      __m256d NE = load2(rn + i + 1), NW = load2(rn + i - 1);
      __m256d SE = load2(rs + i + 1), SW = load2(rs + i - 1);

      __m256d ew = _mm256_add_pd(E, W), ns = _mm256_add_pd(N, S);
      __m256d zzb = _mm256_mul_pd(_mm256_fnmadd_pd(four, C, _mm256_add_pd(ew, ns)), inv4h2);

      __m256d xy = _mm256_sub_pd(_mm256_sub_pd(NE, NW), _mm256_sub_pd(SE, SW));
      __m256d zbzb = _mm256_mul_pd(
          _mm256_add_pd(_mm256_sub_pd(ew, ns), _mm256_mul_pd(half, times_i(xy))), inv4h2);

      __m256d zb = _mm256_mul_pd(
          _mm256_add_pd(_mm256_sub_pd(E, W), times_i(_mm256_sub_pd(N, S))), inv4h);

      const int q = j * n + i;
      __m256d acc = cmul(load2(k.a + q), zzb);
      acc = _mm256_add_pd(acc, cmul(load2(k.b + q), zbzb));
      acc = _mm256_add_pd(acc, cmul(load2(k.c + q), zb));
      acc = _mm256_add_pd(acc, cmul(load2(k.d + q), C));
      _mm256_storeu_pd(reinterpret_cast<double*>(k.out + q), acc);
    }
    for (; i < n; ++i) op_node_scalar(k, i, j);
  }
}

}  // namespace bct::detail

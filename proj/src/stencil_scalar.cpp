#include "bct/stencil.hpp"

namespace bct::detail {

void op_node_scalar(const KernelArgs& k, int i, int j) {
  const int n = k.n;
  const int ie = i + 1 == n ? 0 : i + 1, iw = i == 0 ? n - 1 : i - 1;
  const int jp = j + 1 == n ? 0 : j + 1, jm = j == 0 ? n - 1 : j - 1;
  const cd* p = k.phi;
  const cd C = p[j * n + i];
  const cd E = p[j * n + ie], W = p[j * n + iw];
  const cd N = p[jp * n + i], S = p[jm * n + i];
  const cd NE = p[jp * n + ie], NW = p[jp * n + iw];
  const cd SE = p[jm * n + ie], SW = p[jm * n + iw];

  const double inv4h2 = 0.25 * n * n;
  const double inv4h = 0.25 * n;

  const double zzb_r = ((E.real() + W.real()) + (N.real() + S.real()) - 4.0 * C.real()) * inv4h2;
  const double zzb_i = ((E.imag() + W.imag()) + (N.imag() + S.imag()) - 4.0 * C.imag()) * inv4h2;

  const double xy_r = (NE.real() - NW.real()) - (SE.real() - SW.real());
  const double xy_i = (NE.imag() - NW.imag()) - (SE.imag() - SW.imag());
  const double ewns_r = (E.real() + W.real()) - (N.real() + S.real());
  const double ewns_i = (E.imag() + W.imag()) - (N.imag() + S.imag());
  // multiply xy by i/2
  const double zbzb_r = (ewns_r - 0.5 * xy_i) * inv4h2;
  const double zbzb_i = (ewns_i + 0.5 * xy_r) * inv4h2;

  const double ew_r = E.real() - W.real(), ew_i = E.imag() - W.imag();
  const double ns_r = N.real() - S.real(), ns_i = N.imag() - S.imag();
  const double zb_r = (ew_r - ns_i) * inv4h;
  const double zb_i = (ew_i + ns_r) * inv4h;

  const int q = j * n + i;
  const cd a = k.a[q], b = k.b[q], c = k.c[q], d = k.d[q];
  double re = a.real() * zzb_r - a.imag() * zzb_i;
  double im = a.real() * zzb_i + a.imag() * zzb_r;
  re += b.real() * zbzb_r - b.imag() * zbzb_i;
  im += b.real() * zbzb_i + b.imag() * zbzb_r;
  re += c.real() * zb_r - c.imag() * zb_i;
  im += c.real() * zb_i + c.imag() * zb_r;
  re += d.real() * C.real() - d.imag() * C.imag();
  im += d.real() * C.imag() + d.imag() * C.real();
  k.out[q] = cd(re, im);
}

void op_rows_scalar(const KernelArgs& k, int j0, int j1) {
  for (int j = j0; j < j1; ++j)
    for (int i = 0; i < k.n; ++i) op_node_scalar(k, i, j);
}

}  // namespace bct::detail

#include "bct/connection.hpp"

#include <cmath>

#include "bct/errors.hpp"

namespace bct {

namespace {

const Bicomplex kTau = Bicomplex::tau();

Mat3 make_qtilde() {
  Mat3 q = Mat3::Zero();
  q(0, 1) = q(1, 0) = 1.0;
  q(2, 2) = -1.0;
  return q;
}

Mat3 make_htilde() {
  Mat3 h = Mat3::Zero();
  h(0, 1) = h(1, 0) = 1.0;
  h(2, 2) = 1.0;
  return h;
}

// Columns e1 = (1, i, 0)/sqrt2, e2 = conj(e1), sigma = (0, 0, 1): isotropic
// e1, e2 with q(e1, e2) = 1, and conj(U) = U S with S swapping e1 and e2.
Mat3 make_base() {
  const double r = 1.0 / std::sqrt(2.0);
  Mat3 u = Mat3::Zero();
  u(0, 0) = r;
  u(0, 1) = r;
  u(1, 0) = cd(0.0, r);
  u(1, 1) = cd(0.0, -r);
  u(2, 2) = 1.0;
  return u;
}

BcMat3 commutator(const BcMat3& a, const BcMat3& b) { return a * b - b * a; }

MatField map2(const MatField& a, const MatField& b, BcMat3 (*f)(const BcMat3&, const BcMat3&)) {
  MatField out(a.grid);
  for (size_t q = 0; q < out.v.size(); ++q) out.v[q] = f(a.v[q], b.v[q]);
  return out;
}

MatField bracket(const MatField& a, const MatField& b) { return map2(a, b, commutator); }

template <class Fn>
MatField entrywise(const MatField& m, Fn&& op) {
  MatField out(m.grid);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      for (bool plus : {true, false}) out.set_entry(r, c, plus, op(m.entry(r, c, plus)));
  return out;
}

MatField sym_part(const MatField& m) {
  MatField out(m.grid);
  for (size_t q = 0; q < out.v.size(); ++q) out.v[q] = 0.5 * (m.v[q] + h_adjoint(m.v[q]));
  return out;
}

MatField skew_part(const MatField& m) {
  MatField out(m.grid);
  for (size_t q = 0; q < out.v.size(); ++q) out.v[q] = 0.5 * (m.v[q] - h_adjoint(m.v[q]));
  return out;
}

MatField flatness_expr(const MatField& A, const MatField& B, const BeltramiChart& chart) {
  return d_w(chart, B) - scale(chart.logB, B) - d_zb(A) + scale(chart.logA, A);
}

}  // namespace

double MatField::max_abs() const {
  double m = 0.0;
  for (const BcMat3& x : v) m = std::max(m, x.max_abs());
  return m;
}

Field MatField::entry(int r, int c, bool plus) const {
  Field f(grid);
  for (size_t q = 0; q < v.size(); ++q) f.v[q] = plus ? v[q].plus(r, c) : v[q].minus(r, c);
  return f;
}

void MatField::set_entry(int r, int c, bool plus, const Field& f) {
  for (size_t q = 0; q < v.size(); ++q) (plus ? v[q].plus(r, c) : v[q].minus(r, c)) = f.v[q];
}

MatField operator+(const MatField& a, const MatField& b) {
  MatField out(a.grid);
  for (size_t q = 0; q < out.v.size(); ++q) out.v[q] = a.v[q] + b.v[q];
  return out;
}

MatField operator-(const MatField& a, const MatField& b) {
  MatField out(a.grid);
  for (size_t q = 0; q < out.v.size(); ++q) out.v[q] = a.v[q] - b.v[q];
  return out;
}

MatField scale(const Field& f, const MatField& m) {
  MatField out(m.grid);
  for (size_t q = 0; q < out.v.size(); ++q) out.v[q] = f.v[q] * m.v[q];
  return out;
}

MatField d_zb(const MatField& m) {
  return entrywise(m, [](const Field& f) { return d_zb(f); });
}

MatField d_w(const BeltramiChart& chart, const MatField& m) {
  return entrywise(m, [&chart](const Field& f) { return d_w(chart, f); });
}

const Mat3& Qtilde() {
  static const Mat3 q = make_qtilde();
  return q;
}

const Mat3& Htilde() {
  static const Mat3 h = make_htilde();
  return h;
}

BcMat3 FlatConnectionField::omega_x(int i, int j) const {
  const int q = grid().idx(i, j);
  cd f = 1.0 / chart.dwz.v[q];
  cd g = chart.dzbwb.v[q] * (1.0 - std::conj(chart.mu.v[q]));
  return f * Ahat.v[q] + g * Bhat.v[q];
}

BcMat3 FlatConnectionField::omega_y(int i, int j) const {
  const int q = grid().idx(i, j);
  const cd I(0.0, 1.0);
  cd f = I / chart.dwz.v[q];
  cd g = -I * chart.dzbwb.v[q] * (1.0 + std::conj(chart.mu.v[q]));
  return f * Ahat.v[q] + g * Bhat.v[q];
}

FlatConnectionField assemble(const Field& psi, const CubicPair& C, const BeltramiChart& chart) {
  const TorusGrid g = psi.grid;
  FlatConnectionField conn;
  conn.chart = chart;
  conn.Ahat = MatField(g);
  conn.Bhat = MatField(g);

  Field psi_w = d_w(chart, psi);
  Field psi_zb = d_zb(psi);
  Field dw_log_dwz = d_w(chart, chart.dwz) / chart.dwz;
  Field dzb_log_dzbwb = d_zb(chart.dzbwb) / chart.dzbwb;
  conn.s2 = fexp(cd(2.0) * psi) * chart.dwz * chart.dzbwb;
  Field betab = fconj(C.beta);

  for (size_t q = 0; q < conn.Ahat.v.size(); ++q) {
    const cd dwz = chart.dwz.v[q], dzbwb = chart.dzbwb.v[q], s2 = conn.s2.v[q];
    const cd s = std::exp(psi.v[q]) * std::sqrt(dwz * dzbwb);
    const cd a11 = -psi_w.v[q] + 0.5 * chart.logB.v[q] - 0.5 * dw_log_dwz.v[q];
    const cd b11 = psi_zb.v[q] + 0.5 * dzb_log_dzbwb.v[q] - 0.5 * chart.logA.v[q];
    const cd a = C.alpha.v[q] * dwz * dwz * dwz / s2;
    const cd b = betab.v[q] * dzbwb * dzbwb * dzbwb / s2;

    BcMat3& A = conn.Ahat.v[q];
    A.set(0, 0, a11);
    A.set(1, 1, -a11);
    A.set(0, 1, -a * kTau);
    A.set(1, 2, s);
    A.set(2, 0, s);

    BcMat3& B = conn.Bhat.v[q];
    B.set(0, 0, b11);
    B.set(1, 1, -b11);
    B.set(1, 0, -b * kTau);
    B.set(0, 2, s);
    B.set(2, 1, s);
  }
  return conn;
}

double invariant_residual(const FlatConnectionField& conn) {
  const Mat3& Qt = Qtilde();
  double r = 0.0;
  for (const MatField* m : {&conn.Ahat, &conn.Bhat})
    for (const BcMat3& X : m->v) {
      r = std::max(r, std::abs(X.plus.trace()));
      r = std::max(r, std::abs(X.minus.trace()));
      r = std::max(r, (X.plus.transpose() * Qt + Qt * X.minus).cwiseAbs().maxCoeff());
      r = std::max(r, (X.minus.transpose() * Qt + Qt * X.plus).cwiseAbs().maxCoeff());
    }
  return r;
}

MatField maurer_cartan_residual(const FlatConnectionField& conn) {
  return flatness_expr(conn.Ahat, conn.Bhat, conn.chart) + bracket(conn.Ahat, conn.Bhat);
}

ReducedSystem reduced_system_residual(const Field& psi, const CubicPair& C, const BeltramiChart& chart) {
  ComplexMetric h{psi, chart};
  Field s2 = h.s2();
  Field lap = laplacian(h, psi);
  Field cn = cubic_norm(h, C);
  ReducedSystem rs;
  rs.r0 = Field(psi.grid);
  for (size_t q = 0; q < rs.r0.v.size(); ++q) rs.r0.v[q] = s2.v[q] * (lap.v[q] + 8.0 * cn.v[q] - 1.0);
  rs.r1 = d_zb(C.alpha) * fpow(chart.dwz, 3) / s2;
  rs.r2 = d_w(chart, fconj(C.beta)) * fpow(chart.dzbwb, 3) / s2;
  return rs;
}

Loop Loop::x_period(int n, int i0, int j0) {
  Loop l;
  l.i0 = i0;
  l.j0 = j0;
  l.steps.assign(n, {1, 0});
  return l;
}

Loop Loop::y_period(int n, int i0, int j0) {
  Loop l;
  l.i0 = i0;
  l.j0 = j0;
  l.steps.assign(n, {0, 1});
  return l;
}

void Loop::validate(int n) const {
  int sx = 0, sy = 0;
  for (auto [dx, dy] : steps) {
    if (std::abs(dx) + std::abs(dy) != 1) throw Error(Errc::ConfigError, "loop step is not a unit grid step");
    sx += dx;
    sy += dy;
  }
  if (sx % n != 0 || sy % n != 0) throw Error(Errc::ConfigError, "loop does not close on the torus");
}

const BcMat3& base_frame() {
  static const BcMat3 f0(make_base(), make_base());
  return f0;
}

BcMat3 frame_to_standard(const BcMat3& X) {
  const BcMat3& f0 = base_frame();
  return f0 * X * inverse(f0);
}

BcMat3 holonomy(const FlatConnectionField& conn, const Loop& loop, Basis basis, bool* flatness_warning) {
  const TorusGrid g = conn.grid();
  loop.validate(g.n);
  if (flatness_warning) *flatness_warning = maurer_cartan_residual(conn).max_abs() > 1e-4;
  const double h = g.h();
  BcMat3 hol = BcMat3::identity();
  int i = loop.i0, j = loop.j0;
  for (auto [dx, dy] : loop.steps) {
    int ni = i + dx, nj = j + dy;
    BcMat3 mid = dx != 0 ? 0.5 * (conn.omega_x(i, j) + conn.omega_x(ni, nj))
                         : 0.5 * (conn.omega_y(i, j) + conn.omega_y(ni, nj));
    double sgn = static_cast<double>(dx + dy);
    hol = hol * expm((sgn * h) * mid);
    i = g.wrap(ni);
    j = g.wrap(nj);
  }
  return basis == Basis::Standard ? frame_to_standard(hol) : hol;
}

Sl3Result to_sl3(const BcMat3& X) {
  Mat3 M = phi_inv(X, 1e-8);
  return {M, std::abs(M.determinant() - 1.0)};
}

BcMat3 h_adjoint(const BcMat3& X) {
  const Mat3& H = Htilde();
  return {H * X.plus.transpose() * H, H * X.minus.transpose() * H};
}

HiggsData higgs_split(const FlatConnectionField& conn) {
  HiggsData hd;
  hd.metricH = BcMat3(Htilde(), Htilde());
  Field inv_a = map(conn.chart.dwz, [](cd z) { return 1.0 / z; });
  Field inv_b = map(conn.chart.dzbwb, [](cd z) { return 1.0 / z; });
  hd.phi10 = scale(inv_a, sym_part(conn.Ahat));
  hd.dH10 = scale(inv_a, skew_part(conn.Ahat));
  hd.phi01 = scale(inv_b, sym_part(conn.Bhat));
  hd.dH01 = scale(inv_b, skew_part(conn.Bhat));
  return hd;
}

HiggsResiduals higgs_residuals(const FlatConnectionField& conn) {
  MatField As = sym_part(conn.Ahat), Ak = skew_part(conn.Ahat);
  MatField Bs = sym_part(conn.Bhat), Bk = skew_part(conn.Bhat);
  HiggsResiduals r;
  r.holomorphic = scale(conn.chart.logA, As) - d_zb(As) + bracket(As, Bk);
  r.curvature = flatness_expr(Ak, Bk, conn.chart) + bracket(Ak, Bk) + bracket(As, Bs);
  return r;
}

}  // namespace bct

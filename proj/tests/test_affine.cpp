#include <doctest.h>

#include <random>

#include "bct/affine.hpp"
#include "bct/errors.hpp"
#include "bct/gauss.hpp"
#include "oracles.hpp"

using namespace bct;

namespace {

double max_abs_entry(const Mat2d& m) { return m.cwiseAbs().maxCoeff(); }

// Periodic bump used to rescale a lift.
double lambda(double x, double y) { return 0.2 * std::sin(oracle::kTwoPi * x) * std::cos(oracle::kTwoPi * y); }

struct Wang {
  Field psi;
  CubicPair C;
  FlatConnectionField conn;
};

Wang wang_data(int n, cd q) {
  const TorusGrid g = make_grid(n);
  GaussProblem pb = wang_specialize(Field(g, q));
  SolveReport sr = solve_newton(pb);
  return {sr.psi, pb.C, assemble(sr.psi, pb.C, pb.background.chart)};
}

}  // namespace

TEST_CASE("hyperboloid patch: S = Id, xi = f, curvature -1, at second order") {
  double S[2], X[2], P[2];
  for (int k = 0; k < 2; ++k) {
    AffinePair p = oracle::hyperboloid_patch(32 << k, 3, 1.0);
    CHECK(pairing_defect(p) < 1e-14);
    StructureReport sr = structure_residuals(p);
    S[k] = sr.S_residual;
    X[k] = sr.xi_residual;
    double kerr = 0.0;
    for (double K : sr.data.K) kerr = std::max(kerr, std::abs(K + 1.0));
    CHECK(kerr < 1e-2);
    P[k] = sr.pick_symmetry;
    for (const auto& C : sr.data.pickC) {
      CHECK(std::abs(C[1] - C[2]) < 1e-12);
      CHECK(std::abs(C[1] - C[4]) < 1e-12);
      CHECK(std::abs(C[3] - C[5]) < 1e-12);
      CHECK(std::abs(C[3] - C[6]) < 1e-12);
    }
    CHECK(sr.pick_trace < 1e-2);
  }
  CHECK(S[0] < 1e-2);
  CHECK(X[0] < 1e-2);
  CHECK(S[0] / S[1] == doctest::Approx(4.0).epsilon(0.15));
  CHECK(X[0] / X[1] == doctest::Approx(4.0).epsilon(0.15));
  CHECK(P[0] / P[1] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("structure residuals are invariant under unimodular maps") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> nd;
  Eigen::Matrix3d L;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) L(i, j) = (i == j ? 1.0 : 0.0) + 0.3 * nd(rng);
  if (L.determinant() < 0) L.col(0) *= -1.0;
  L /= std::cbrt(L.determinant());
  const Eigen::Matrix3d Lit = L.inverse().transpose();

  AffinePair p = oracle::hyperboloid_patch(32, 3, 1.0);
  AffinePair q = p;
  for (auto& v : q.fplus.v) v = L * v;
  for (auto& v : q.fminus.v) v = Lit * v;
  CHECK(pairing_defect(q) < 1e-13);
  StructureReport a = structure_residuals(p), b = structure_residuals(q);
  double gdiff = 0.0;
  for (size_t k = 0; k < a.data.gB.size(); ++k) gdiff = std::max(gdiff, max_abs_entry(a.data.gB[k] - b.data.gB[k]));
  CHECK(gdiff < 1e-9);
  CHECK(std::abs(a.S_residual - b.S_residual) < 1e-8);
}

TEST_CASE("normalize_lift recovers an injected rescaling") {
  AffinePair p = oracle::hyperboloid_patch(64, 3, 1.0);
  NormalizeReport r0;
  normalize_lift(p, &r0);
  CHECK(r0.mu.max_abs() < 1e-3);

  AffinePair q = p;
  const double h = p.h();
  for (int j = -3; j < 64 + 3; ++j)
    for (int i = -3; i < 64 + 3; ++i) {
      const double l = lambda(i * h, j * h);
      q.fplus.at(i, j) *= std::exp(l);
      q.fminus.at(i, j) *= std::exp(-l);
    }
  NormalizeReport r;
  AffinePair back = normalize_lift(q, &r);
  double err = 0.0;
  for (int j = 0; j < 64; ++j)
    for (int i = 0; i < 64; ++i) err = std::max(err, std::abs(r.mu(i, j) + lambda(i * h, j * h) - r0.mu(i, j)));
  CHECK(err < 50.0 * h * h);
  CHECK(pairing_defect(back) < 1e-12);
  CHECK(conormal_defect(back) < conormal_defect(q));
}

TEST_CASE("normalize_lift rejects a lift with curl") {
  const int n = 32;
  AffinePair p = oracle::hyperboloid_patch(n, 3, 1.0);
  const double h = p.h();
  // Add eps sin(2 pi y) times the covector dual to f_x, so that
  // F = (eps sin(2 pi y), 0) and curl F = -2 pi eps cos(2 pi y).
  for (int j = -3; j < n + 3; ++j)
    for (int i = -3; i < n + 3; ++i) {
      const Vec3d f = p.fplus.at(i, j);
      const Vec3d fx(1.0, 0.0, f(0) / f(2)), fy(0.0, 1.0, f(1) / f(2));
      Eigen::Matrix3d M;
      M << fx, fy, f;
      const Vec3d dual_x = M.inverse().row(0).transpose();
      p.fminus.at(i, j) += 0.05 * std::sin(oracle::kTwoPi * j * h) * dual_x;
    }
  try {
    normalize_lift(p);
    FAIL("expected NotIsotropic");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotIsotropic);
  }
}

TEST_CASE("frame integration on Wang data and the dual swap") {
  Wang w = wang_data(32, std::polar(1.3, 0.7));
  FrameReport fr;
  AffinePair pair = integrate_frame(w.conn, 3, 1e-3, &fr);
  CHECK(fr.imag_residual < 1e-10);
  CHECK(pairing_defect(pair) < 1e-10);

  FlatConnectionField twice = tau_swapped(tau_swapped(w.conn));
  CHECK((twice.Ahat - w.conn.Ahat).max_abs() == 0.0);

  AffinePair swapped = integrate_frame(tau_swapped(w.conn), 3, 1e-3);
  AffinePair a = normalize_lift(pair), b = normalize_lift(swapped);
  StructureReport am = structure_residuals(a, true), bp = structure_residuals(b, false);
  double gdiff = 0.0;
  for (size_t k = 0; k < am.data.gB.size(); ++k) gdiff = std::max(gdiff, max_abs_entry(am.data.gB[k] - bp.data.gB[k]));
  CHECK(gdiff < 1e-8);
  StructureReport ap = structure_residuals(a, false);
  CHECK(pick_dual_residual(ap.data, am.data) < 20.0 / (32.0 * 32.0));
}

TEST_CASE("frame integration rejects data off the real locus") {
  const TorusGrid g = make_grid(16);
  BeltramiChart chart = BeltramiChart::constant(g, 0.0);
  CubicPair C{Field(g, 1.0), Field(g, cd(0.5, 0.5))};
  FlatConnectionField conn = assemble(Field(g, 0.0), C, chart);
  try {
    integrate_frame(conn);
    FAIL("expected NotReal");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotReal);
  }
}

TEST_CASE("Wang equation on the Blaschke data of the lift") {
  Wang w = wang_data(64, 1.0);
  AffinePair pair = normalize_lift(integrate_frame(w.conn));
  StructureReport sr = structure_residuals(pair);
  WangCheck wc = pick_and_wang(sr.data);
  double worst = 0.0;
  for (double r : wc.residual) worst = std::max(worst, std::abs(r));
  CHECK(worst < 20.0 / (64.0 * 64.0));
}

TEST_CASE("second variation closed form") {
  const TorusGrid g = make_grid(16);
  // Z = e1 of unit g_I-length over psi = 0, where rho = 2.
  Field Zx(g, 1.0 / std::sqrt(2.0)), Zy(g, 0.0);
  SecondVariation sv = second_variation_trace(Zx, Zy, Field(g, 0.0), Field(g, 0.0));
  CHECK(std::abs(sv.curvature.mean() + 5.0) < 1e-12);
  CHECK(sv.shape.max_abs() == 0.0);
  CHECK(sv.normal.max_abs() < 1e-14);
  CHECK(std::abs(sv.total.mean() + 5.0) < 1e-12);

  SecondVariation zero = second_variation_trace(Field(g, 0.0), Field(g, 0.0), Field(g, 0.0), Field(g, 1.0));
  CHECK(zero.total.max_abs() == 0.0);

  // The curvature part alone is -2|Z|^2 - 3 (Z1^2 + Z2^2) = -5 |Z|^2.
  Field Zr(g, 0.3), Zs(g, -0.4);
  SecondVariation r = second_variation_trace(Zr, Zs, Field(g, 0.0), Field(g, 1.0));
  CHECK(std::abs(r.curvature.mean() + 5.0 * 2.0 * 0.25) < 1e-12);
  CHECK(r.shape.mean().real() < 0.0);
}

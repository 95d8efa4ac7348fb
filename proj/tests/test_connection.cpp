#include <doctest.h>

#include "bct/connection.hpp"
#include "bct/errors.hpp"
#include "bct/gauss.hpp"
#include "oracles.hpp"

using namespace bct;

namespace {

FlatConnectionField constant_data(int n) {
  const TorusGrid g = make_grid(n);
  return assemble(Field(g, 0.0), CubicPair{Field(g, 1.0), Field(g, 1.0)}, BeltramiChart::constant(g, 0.0));
}

// Entry matrix with tau written through its idempotent parts.
BcMat3 bc_from(const Mat3& z1, const Mat3& z2) { return BcMat3::from_z(z1, z2); }

}  // namespace

TEST_CASE("constant data gives the expected hat matrices") {
  FlatConnectionField c = constant_data(16);
  Mat3 A1 = Mat3::Zero(), A2 = Mat3::Zero(), B1 = Mat3::Zero(), B2 = Mat3::Zero();
  A2(0, 1) = -1.0;
  A1(1, 2) = 1.0;
  A1(2, 0) = 1.0;
  B1(0, 2) = 1.0;
  B2(1, 0) = -1.0;
  B1(2, 1) = 1.0;
  const BcMat3 A = bc_from(A1, A2), B = bc_from(B1, B2);
  for (int q : {0, 100, 255}) {
    CHECK((c.Ahat.v[q] - A).max_abs() < 1e-15);
    CHECK((c.Bhat.v[q] - B).max_abs() < 1e-15);
  }
  CHECK(maurer_cartan_residual(c).max_abs() == 0.0);
  CHECK(invariant_residual(c) < 1e-14);
}

TEST_CASE("vanishing cubic form leaves only the s entries") {
  const TorusGrid g = make_grid(16);
  FlatConnectionField c = assemble(Field(g, 0.0), CubicPair{Field(g, 0.0), Field(g, 0.0)}, BeltramiChart::constant(g, 0.0));
  for (const BcMat3& A : c.Ahat.v) {
    CHECK(std::abs(A(0, 1).plus()) == 0.0);
    CHECK(std::abs(A(1, 2).plus() - 1.0) < 1e-15);
    CHECK(std::abs(A(2, 0).plus() - 1.0) < 1e-15);
  }
}

TEST_CASE("s entries follow psi on a general chart") {
  const TorusGrid g = make_grid(32);
  BeltramiChart chart = BeltramiChart::constant(g, cd(0.2, -0.1));
  Field psi = oracle::trig_field(g, 0.3);
  FlatConnectionField c = assemble(psi, CubicPair{Field(g, 1.0), Field(g, 1.0)}, chart);
  double worst = 0.0;
  for (size_t q = 0; q < psi.v.size(); ++q) {
    const cd s = std::sqrt(c.s2.v[q]);
    worst = std::max(worst, std::abs(c.Ahat.v[q](1, 2).plus() - s));
    worst = std::max(worst, std::abs(c.Bhat.v[q](2, 1).plus() - s));
  }
  CHECK(worst < 1e-13);
  CHECK(invariant_residual(c) < 1e-12);
}

TEST_CASE("Maurer-Cartan entries reproduce the reduced system at second order") {
  double e00[2], e11[2], e01[2];
  for (int k = 0; k < 2; ++k) {
    const TorusGrid g = make_grid(32 << k);
    BeltramiChart chart = BeltramiChart::constant(g, cd(0.3, 0.1));
    Field psi = oracle::trig_field(g, 0.2);
    Field alpha = Field::from_fn(g, [](double x, double) { return cd(1.0 + 0.1 * std::cos(oracle::kTwoPi * x)); });
    CubicPair C{alpha, Field(g, cd(0.7, 0.2))};
    MatField mc = maurer_cartan_residual(assemble(psi, C, chart));
    ReducedSystem rs = reduced_system_residual(psi, C, chart);
    e00[k] = max_abs_diff(mc.entry(0, 0, true), rs.r0);
    e11[k] = (mc.entry(1, 1, true) + rs.r0).max_abs();
    e01[k] = max_abs_diff(mc.entry(0, 1, true), rs.r1);
  }
  CHECK(e00[0] / e00[1] == doctest::Approx(4.0).epsilon(0.05));
  CHECK(e11[0] / e11[1] == doctest::Approx(4.0).epsilon(0.05));
  CHECK(e01[0] / e01[1] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("x-period holonomy of constant data is exp(A + B)") {
  FlatConnectionField c = constant_data(64);
  BcMat3 H = holonomy(c, Loop::x_period(64), Basis::Frame);
  BcMat3 S = c.Ahat.v[0] + c.Bhat.v[0];
  CHECK((H.plus - oracle::expm_taylor(S.plus)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((H.minus - oracle::expm_taylor(S.minus)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("holonomy of solved data") {
  const TorusGrid g = make_grid(64);
  GaussProblem pb = wang_specialize(Field(g, std::polar(1.3, 0.7)));
  SolveReport sr = solve_newton(pb);
  FlatConnectionField c = assemble(sr.psi, pb.C, pb.background.chart);
  BcMat3 X = holonomy(c, Loop::x_period(64)), Y = holonomy(c, Loop::y_period(64));
  BcMat3 comm = X * Y - Y * X;
  CHECK(comm.max_abs() / std::max(1.0, X.max_abs() * Y.max_abs()) < 1e-10);
  Sl3Result m = to_sl3(X);
  CHECK(m.det_defect < 1e-10);
  CHECK(phi_compat_residual(X) < 1e-8);
  // A loop that goes around and back is trivial.
  Loop back;
  back.steps.assign(8, {1, 0});
  back.steps.insert(back.steps.end(), 8, {-1, 0});
  CHECK((holonomy(c, back) - BcMat3::identity()).max_abs() < 1e-12);
}

TEST_CASE("loops are validated") {
  Loop bad;
  bad.steps = {{1, 0}, {2, 0}};
  CHECK_THROWS_AS(bad.validate(16), Error);
  Loop open;
  open.steps = {{1, 0}, {0, 1}};
  CHECK_THROWS_AS(open.validate(16), Error);
  CHECK_NOTHROW(Loop::x_period(16).validate(16));
}

TEST_CASE("Higgs split reconstructs the connection") {
  const TorusGrid g = make_grid(32);
  Field psi = oracle::trig_field(g, 0.2);
  FlatConnectionField c = assemble(psi, CubicPair{Field(g, 1.0), Field(g, 1.0)}, BeltramiChart::constant(g, 0.0));
  HiggsData hd = higgs_split(c);
  CHECK(((hd.dH10 + hd.phi10) - c.Ahat).max_abs() < 1e-13);
  CHECK(((hd.dH01 + hd.phi01) - c.Bhat).max_abs() < 1e-13);
  for (size_t q = 0; q < hd.phi10.v.size(); q += 37) {
    CHECK((h_adjoint(hd.phi10.v[q]) - hd.phi10.v[q]).max_abs() < 1e-13);
    CHECK((h_adjoint(hd.dH10.v[q]) + hd.dH10.v[q]).max_abs() < 1e-13);
  }
  // On constant data the (1,0) Higgs field is the symmetric part of A-hat.
  FlatConnectionField k = constant_data(16);
  HiggsData kd = higgs_split(k);
  const BcMat3& A = k.Ahat.v[0];
  CHECK((kd.phi10.v[0] - 0.5 * (A + h_adjoint(A))).max_abs() < 1e-15);
}

TEST_CASE("Higgs curvature residual is the skew part of flatness") {
  const TorusGrid g = make_grid(32);
  Field psi = oracle::trig_field(g, 0.2);
  FlatConnectionField c = assemble(psi, CubicPair{Field(g, 1.0), Field(g, cd(0.6, 0.3))}, BeltramiChart::constant(g, 0.2));
  MatField mc = maurer_cartan_residual(c);
  HiggsResiduals hr = higgs_residuals(c);
  double worst = 0.0;
  for (size_t q = 0; q < mc.v.size(); ++q) {
    const BcMat3 skew = 0.5 * (mc.v[q] - h_adjoint(mc.v[q]));
    worst = std::max(worst, (hr.curvature.v[q] - skew).max_abs());
  }
  CHECK(worst < 1e-10 * std::max(1.0, mc.max_abs()));
}

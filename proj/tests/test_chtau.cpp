#include <doctest.h>

#include <random>

#include "bct/chtau.hpp"
#include "bct/errors.hpp"
#include "bct/replib.hpp"

using namespace bct;

namespace {

std::mt19937_64 rng(11);
std::normal_distribution<double> nd;

cd rc() { return {nd(rng), nd(rng)}; }
Vec3 rv() { return Vec3(rc(), rc(), rc()); }
BcVec3 rbv() { return BcVec3(rv(), rv()); }

HyperboloidPoint random_point() { return HyperboloidPoint::normalize(rbv()); }

Vec3 real_vec(double a, double b, double c) { return Vec3(a, b, c); }

}  // namespace

TEST_CASE("q_form examples") {
  BcVec3 e3 = BcVec3::from_z(real_vec(0, 0, 1), Vec3::Zero());
  Bicomplex q = q_form(e3, e3);
  CHECK(std::abs(q.plus() + 1.0) == 0.0);
  CHECK(std::abs(q.minus() + 1.0) == 0.0);
  BcVec3 e1 = BcVec3::from_z(real_vec(1, 0, 0), Vec3::Zero()), e2 = BcVec3::from_z(real_vec(0, 1, 0), Vec3::Zero());
  CHECK(std::abs(q_form(e1, e2).plus()) == 0.0);
  for (int k = 0; k < 50; ++k) {
    BcVec3 z = rbv(), w = rbv();
    Bicomplex lhs = q_form(Bicomplex::tau() * z, z), rhs = Bicomplex::tau() * q_form(z, z);
    CHECK(std::abs(lhs.plus() - rhs.plus()) < 1e-12);
    CHECK(std::abs(lhs.minus() - rhs.minus()) < 1e-12);
    Bicomplex a = q_form(z, w), b = tau_conj(q_form(w, z));
    CHECK(std::abs(a.plus() - b.plus()) < 1e-12);
    CHECK(std::abs(a.minus() - b.minus()) < 1e-12);
  }
}

TEST_CASE("normalized points lie on the quadric") {
  for (int k = 0; k < 50; ++k) {
    HyperboloidPoint p = random_point();
    Bicomplex q = q_form(p.rep, p.rep);
    CHECK(std::abs(q.plus() + 1.0) < 1e-12);
    CHECK(std::abs(q.minus() + 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(HyperboloidPoint::from_rep(BcVec3::from_z(real_vec(1, 0, 0), Vec3::Zero())), Error);
}

TEST_CASE("incidence model") {
  HyperboloidPoint o = HyperboloidPoint::from_rep(BcVec3::from_z(real_vec(0, 0, 1), Vec3::Zero()));
  IncidencePoint ip = to_incidence(o);
  CHECK((ip.v - real_vec(0, 0, 1)).norm() < 1e-15);
  CHECK((ip.phi - Row3(0.0, 0.0, -1.0)).norm() < 1e-15);

  for (int k = 0; k < 100; ++k) {
    HyperboloidPoint p = random_point();
    IncidencePoint a = to_incidence(p);
    CHECK(std::abs((a.phi * a.v)(0) + 1.0) < 1e-12);
    // Oracle inverse: x = (v + Q phi^T)/2, y = (v - Q phi^T)/2, rep = x + tau y.
    Vec3 qphi = Qmat() * a.phi.transpose();
    BcVec3 rep = BcVec3::from_z(0.5 * (a.v + qphi), 0.5 * (a.v - qphi));
    CHECK(same_point(HyperboloidPoint{rep}, p));
    CHECK(same_point(from_incidence(a), p));
  }
}

TEST_CASE("incidence is equivariant") {
  for (int k = 0; k < 20; ++k) {
    Mat3 A;
    for (int i = 0; i < 3; ++i) A.row(i) = rv().transpose();
    HyperboloidPoint p = random_point();
    IncidencePoint a = to_incidence(act(phi_iso(A), p)), b = to_incidence(p);
    Vec3 Av = A * b.v;
    Row3 phiAinv = b.phi * A.inverse();
    // Projective equality: parallel vectors.
    CHECK(std::abs(std::abs(a.v.normalized().dot(Av.normalized())) - 1.0) < 1e-9);
    CHECK(std::abs(std::abs(a.phi.normalized().dot(phiAinv.normalized())) - 1.0) < 1e-9);
  }
}

TEST_CASE("isometry action preserves q") {
  for (int k = 0; k < 200; ++k) {
    Mat3 A;
    for (int i = 0; i < 3; ++i) A.row(i) = rv().transpose();
    HyperboloidPoint p = random_point();
    HyperboloidPoint ap = act(phi_iso(A), p);
    Bicomplex q = q_form(ap.rep, ap.rep);
    CHECK(std::abs(q.plus() + 1.0) < 1e-11);
    CHECK(std::abs(q.minus() + 1.0) < 1e-11);
  }
}

TEST_CASE("tangent projection") {
  HyperboloidPoint p = random_point();
  CHECK(project_tangent(p, p.rep).vec.max_abs() < 1e-12);
  for (int k = 0; k < 50; ++k) {
    TangentVector X = project_tangent(p, rbv());
    Bicomplex q = q_form(X.vec, p.rep);
    CHECK(std::abs(q.plus()) < 1e-12);
    CHECK(std::abs(q.minus()) < 1e-12);
    CHECK((project_tangent(p, X.vec).vec - X.vec).max_abs() < 1e-12);
  }
}

TEST_CASE("para-Hermitian identities") {
  HyperboloidPoint p = random_point();
  for (int k = 0; k < 50; ++k) {
    TangentVector X = project_tangent(p, rbv()), Y = project_tangent(p, rbv());
    ParaHermitian xy = para_hermitian_eval(X, Y);
    CHECK(std::abs(para_hermitian_eval(apply_P(X), apply_P(Y)).g + xy.g) < 1e-11);
    CHECK(std::abs(xy.omega + para_hermitian_eval(X, apply_P(Y)).g) < 1e-11);
    CHECK(std::abs(para_hermitian_eval(apply_I(X), Y).g - cd(0, 1) * xy.g) < 1e-11);
    CHECK(std::abs(para_hermitian_eval(apply_J(X), apply_J(Y)).g - xy.g) < 1e-11);
  }
  HyperboloidPoint o = HyperboloidPoint::from_rep(BcVec3::from_z(real_vec(0, 0, 1), Vec3::Zero()));
  TangentVector X{o, BcVec3::from_z(real_vec(1, 0, 0), Vec3::Zero())};
  CHECK(std::abs(para_hermitian_eval(X, X).omega) < 1e-15);
  TangentVector elsewhere{random_point(), X.vec};
  CHECK_THROWS_AS(para_hermitian_eval(X, elsewhere), Error);
}

TEST_CASE("omega is skew and g symmetric") {
  for (int k = 0; k < 50; ++k) {
    HyperboloidPoint p = random_point();
    TangentVector X = project_tangent(p, rbv()), Y = project_tangent(p, rbv());
    ParaHermitian xy = para_hermitian_eval(X, Y), yx = para_hermitian_eval(Y, X);
    CHECK(std::abs(xy.g - yx.g) < 1e-11);
    CHECK(std::abs(xy.omega + yx.omega) < 1e-11);
  }
}

TEST_CASE("para-holomorphic sectional curvature is -4") {
  HyperboloidPoint o = HyperboloidPoint::from_rep(BcVec3::from_z(real_vec(0, 0, 1), Vec3::Zero()));
  TangentVector X{o, BcVec3::from_z(real_vec(1, 0, 0), Vec3::Zero())};
  CHECK(std::abs(para_holo_sectional(o, X) + 4.0) < 1e-10);
  for (int k = 0; k < 50; ++k) {
    HyperboloidPoint p = random_point();
    TangentVector Y = project_tangent(p, rbv());
    CHECK(std::abs(para_holo_sectional(p, Y) + 4.0) < 1e-9);
    TangentVector sY{p, Bicomplex(rc(), rc()) * Y.vec};
    CHECK(std::abs(para_holo_sectional(p, sY) + 4.0) < 1e-9);
    // Closed form: R(Y, PY, PY, Y) = 4 g(Y, Y)^2 over the area -g(Y, Y)^2.
    TangentVector PY = apply_P(Y);
    const cd gyy = g_form(Y.vec, Y.vec);
    CHECK(std::abs(riemann_closed_form(-4.0, Y, PY, PY, Y) / (-gyy * gyy) + 4.0) < 1e-9);
  }
}

TEST_CASE("ambient and closed-form curvature agree on random planes") {
  for (int k = 0; k < 50; ++k) {
    HyperboloidPoint p = random_point();
    TangentVector X = project_tangent(p, rbv()), Y = project_tangent(p, rbv());
    const cd gxx = g_form(X.vec, X.vec), gyy = g_form(Y.vec, Y.vec), gxy = g_form(X.vec, Y.vec);
    const cd area = gxx * gyy - gxy * gxy;
    const cd closed = riemann_closed_form(-4.0, X, Y, Y, X) / area;
    const cd ambient = sectional_ambient(X, Y);
    CHECK(std::abs(closed - ambient) < 1e-8 * std::max(1.0, std::abs(ambient)));
  }
}

TEST_CASE("isotropic directions are rejected") {
  HyperboloidPoint o = HyperboloidPoint::from_rep(BcVec3::from_z(real_vec(0, 0, 1), Vec3::Zero()));
  TangentVector N{o, BcVec3::from_z(Vec3(1.0, cd(0, 1), 0.0), Vec3::Zero())};
  CHECK_THROWS_AS(para_holo_sectional(o, N), Error);
}

TEST_CASE("submanifold membership") {
  auto point = [](const Vec3& z1, const Vec3& z2) { return HyperboloidPoint::normalize(BcVec3::from_z(z1, z2)); };
  Membership o = submanifold_membership(point(real_vec(0, 0, 1), Vec3::Zero()));
  CHECK(o.h2tau);
  CHECK(o.ch2);
  CHECK(o.x);
  Membership c = submanifold_membership(point(Vec3(cd(0, 0.5), 0.0, std::sqrt(1.25)), Vec3::Zero()));
  CHECK(c.x);
  CHECK(!c.ch2);
  Membership t = submanifold_membership(point(real_vec(0, 0, std::sqrt(1.25)), real_vec(0.5, 0, 0)));
  CHECK(t.h2tau);
}

TEST_CASE("boundary flags") {
  Flag f = boundary_flag(real_vec(1, 0, 0), Row3(0.0, 0.0, 1.0));
  CHECK(std::abs((f.plane * f.line)(0)) < 1e-15);
  CHECK(std::abs(std::abs(f.line(0)) - 1.0) < 1e-15);
  try {
    boundary_flag(real_vec(1, 0, 0), Row3(1.0, 0.0, 0.0) * Qmat());
    FAIL("expected NotOnBoundary");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotOnBoundary);
  }
  // The attracting flag of a loxodromic matrix is fixed by it.
  Mat2 A;
  A << 2.0, 1.0, 1.0, 1.0;
  Mat3 M = irreducible_embed(A);
  Loxodromy L = loxodromy(M);
  REQUIRE(L.loxodromic);
  Flag g = boundary_flag(L.attracting.line, L.attracting.plane);
  Vec3 Ml = M * g.line;
  CHECK(std::abs(std::abs(Ml.normalized().dot(g.line.normalized())) - 1.0) < 1e-10);
  Row3 pMinv = g.plane * M.inverse();
  CHECK(std::abs(std::abs(pMinv.normalized().dot(g.plane.normalized())) - 1.0) < 1e-10);
}

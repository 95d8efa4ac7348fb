#include "bct/chtau.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "bct/errors.hpp"

namespace bct {

Bicomplex q_form(const BcVec3& z, const BcVec3& w) {
  const Mat3& Q = Qmat();
  cd p = (z.plus.transpose() * Q * w.minus)(0, 0);
  cd m = (z.minus.transpose() * Q * w.plus)(0, 0);
  return Bicomplex::idem(p, m);
}

HyperboloidPoint HyperboloidPoint::normalize(const BcVec3& z) {
  Bicomplex c = q_form(z, z);
  // q(z,z) is tau-real, so both idempotent parts agree.
  cd c0 = 0.5 * (c.plus() + c.minus());
  if (std::abs(c0) < 1e-14) throw Error(Errc::ZeroDivisor, "q(z,z) vanishes; cannot normalize");
  cd lam = std::sqrt(-1.0 / c0);
  return {lam * z};
}

HyperboloidPoint HyperboloidPoint::from_rep(const BcVec3& z, double tol) {
  Bicomplex c = q_form(z, z);
  double r = std::max(std::abs(c.plus() + 1.0), std::abs(c.minus() + 1.0));
  if (r > tol) throw Error(Errc::NotInImage, "q(z,z) != -1");
  return {z};
}

IncidencePoint to_incidence(const HyperboloidPoint& p) {
  return {p.rep.plus, (Qmat() * p.rep.minus).transpose()};
}

HyperboloidPoint from_incidence(const IncidencePoint& ip) {
  cd s = (ip.phi * ip.v)(0, 0);
  if (std::abs(s) < 1e-14) throw Error(Errc::ZeroDivisor, "phi(v) = 0: point at infinity");
  Vec3 v = -ip.v / s;
  Vec3 m = Qmat() * ip.phi.transpose();
  return {BcVec3(v, m)};
}

HyperboloidPoint act(const BcMat3& X, const HyperboloidPoint& p) { return {X * p.rep}; }

TangentVector project_tangent(const HyperboloidPoint& p, const BcVec3& V) {
  Bicomplex lam = -q_form(V, p.rep);
  return {p, V - lam * p.rep};
}

TangentVector apply_I(const TangentVector& X) { return {X.base, Bicomplex(cd(0, 1)) * X.vec}; }
TangentVector apply_P(const TangentVector& X) { return {X.base, Bicomplex::tau() * X.vec}; }
TangentVector apply_J(const TangentVector& X) { return apply_I(apply_P(X)); }

namespace {

void check_base(const TangentVector& X, const TangentVector& Y) {
  if ((X.base.rep - Y.base.rep).max_abs() > 1e-12)
    throw Error(Errc::BaseMismatch, "tangent vectors at different points");
}

// Ambient second fundamental form of the horizontal distribution.
BcVec3 second_form(const TangentVector& U, const TangentVector& V) {
  return q_form(V.vec, U.vec) * U.base.rep;
}

}  // namespace

ParaHermitian para_hermitian_eval(const TangentVector& X, const TangentVector& Y) {
  check_base(X, Y);
  Bicomplex q = q_form(X.vec, Y.vec);
  return {re_tau(q), im_tau(q)};
}

cd sectional_ambient(const TangentVector& X, const TangentVector& Y) {
  check_base(X, Y);
  cd gxx = g_form(X.vec, X.vec), gyy = g_form(Y.vec, Y.vec), gxy = g_form(X.vec, Y.vec);
  cd area = gxx * gyy - gxy * gxy;
  if (std::abs(area) < 1e-10) throw Error(Errc::IsotropicPlane, "degenerate plane");

  auto sym = [](const TangentVector& U, const TangentVector& V) {
    return Bicomplex(0.5) * (second_form(U, V) + second_form(V, U));
  };
  BcVec3 sxx = sym(X, X), syy = sym(Y, Y), sxy = sym(X, Y);
  BcVec3 axy = Bicomplex(0.5) * (second_form(X, Y) - second_form(Y, X));

  // Gauss equation for the quadric plus the O'Neill term of the quotient.
  cd num = g_form(sxx, syy) - g_form(sxy, sxy) + 3.0 * g_form(axy, axy);
  return num / area;
}

cd para_holo_sectional(const HyperboloidPoint& p, const TangentVector& X) {
  if ((X.base.rep - p.rep).max_abs() > 1e-12)
    throw Error(Errc::BaseMismatch, "tangent vector not based at p");
  cd gxx = g_form(X.vec, X.vec);
  if (std::abs(gxx) < 1e-10) throw Error(Errc::IsotropicPlane, "g(X,X) = 0");
  return sectional_ambient(X, apply_P(X));
}

cd riemann_closed_form(double k, const TangentVector& X, const TangentVector& Y,
                       const TangentVector& Z, const TangentVector& W) {
  auto g = [](const TangentVector& a, const TangentVector& b) { return g_form(a.vec, b.vec); };
  TangentVector PX = apply_P(X), PY = apply_P(Y), PZ = apply_P(Z);
  cd t = g(X, Z) * g(Y, W) - g(Y, Z) * g(X, W) + g(X, PZ) * g(PY, W) - g(Y, PZ) * g(PX, W) +
         2.0 * g(X, PY) * g(PZ, W);
  return -k / 4.0 * t;
}

namespace {

using ResidualFn = std::function<Eigen::VectorXd(const Vec3&, const Vec3&)>;

// Minimizes ||r(e^v z+, e^{-v} z-)|| over v in C. r must be affine in its
// arguments, which makes the Jacobian exact.
double orbit_minimize(const BcVec3& z, const ResidualFn& r, BcVec3* best) {
  auto at = [&](cd v) { return BcVec3(std::exp(v) * z.plus, std::exp(-v) * z.minus); };
  auto eval = [&](cd v) {
    BcVec3 w = at(v);
    return r(w.plus, w.minus);
  };

  std::vector<std::pair<double, cd>> starts;
  constexpr int kSamples = 64;
  for (int k = 0; k < kSamples; ++k) {
    cd v(0.0, 2.0 * std::numbers::pi * k / kSamples);
    starts.emplace_back(eval(v).norm(), v);
  }
  std::sort(starts.begin(), starts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double best_res = std::numeric_limits<double>::infinity();
  cd best_v = 0.0;
  const int nstart = std::min<int>(4, static_cast<int>(starts.size()));
  for (int s = 0; s < nstart; ++s) {
    cd v = starts[s].second;
    double lambda = 1e-6;
    Eigen::VectorXd rv = eval(v);
    for (int it = 0; it < 200; ++it) {
      BcVec3 w = at(v);
      Eigen::VectorXd r0 = r(w.plus, w.minus);
      Eigen::VectorXd rz = r(Vec3::Zero(), Vec3::Zero());
      Eigen::MatrixXd J(r0.size(), 2);
      J.col(0) = r(w.plus, -w.minus) - rz;
      J.col(1) = r(cd(0, 1) * w.plus, cd(0, -1) * w.minus) - rz;
      Eigen::Matrix2d H = J.transpose() * J;
      Eigen::Vector2d gvec = J.transpose() * r0;
      if (gvec.norm() < 1e-300) break;
      Eigen::Vector2d step = (H + lambda * Eigen::Matrix2d::Identity()).ldlt().solve(-gvec);
      cd vn = v + cd(step(0), step(1));
      Eigen::VectorXd rn = eval(vn);
      if (rn.norm() < r0.norm()) {
        v = vn;
        rv = rn;
        lambda = std::max(lambda * 0.1, 1e-15);
        if (step.norm() < 1e-15) break;
      } else {
        lambda *= 10.0;
        if (lambda > 1e10) break;
      }
    }
    double res = rv.cwiseAbs().maxCoeff();
    if (res < best_res) {
      best_res = res;
      best_v = v;
    }
  }
  if (best) *best = at(best_v);
  return best_res;
}

Eigen::VectorXd stack(std::initializer_list<Eigen::Vector3d> parts) {
  Eigen::VectorXd out(3 * parts.size());
  int k = 0;
  for (const auto& p : parts) out.segment<3>(3 * k++) = p;
  return out;
}

}  // namespace

double orbit_residual(const HyperboloidPoint& p, RealForm form, BcVec3* best) {
  ResidualFn r;
  switch (form) {
    case RealForm::H2tau:
      r = [](const Vec3& P, const Vec3& M) {
        Vec3 z1 = 0.5 * (P + M), z2 = 0.5 * (P - M);
        return stack({z1.imag(), z2.imag()});
      };
      break;
    case RealForm::CH2:
      r = [](const Vec3& P, const Vec3& M) {
        Vec3 z1 = 0.5 * (P + M), z2 = 0.5 * (P - M);
        return stack({z1.imag(), z2.real()});
      };
      break;
    case RealForm::X:
      r = [](const Vec3& P, const Vec3& M) {
        Vec3 z2 = 0.5 * (P - M);
        return stack({z2.real(), z2.imag()});
      };
      break;
  }
  return orbit_minimize(p.rep, r, best);
}

Membership submanifold_membership(const HyperboloidPoint& p, double tol) {
  Membership m;
  m.h2tau = orbit_residual(p, RealForm::H2tau) <= tol;
  m.ch2 = orbit_residual(p, RealForm::CH2) <= tol;
  m.x = orbit_residual(p, RealForm::X) <= tol;
  return m;
}

bool same_point(const HyperboloidPoint& a, const HyperboloidPoint& b, double tol) {
  const BcVec3 target = a.rep;
  ResidualFn r = [&](const Vec3& P, const Vec3& M) {
    Vec3 dp = P - target.plus, dm = M - target.minus;
    return stack({dp.real(), dp.imag(), dm.real(), dm.imag()});
  };
  // r is affine, not linear: the Jacobian in orbit_minimize subtracts r(0,0).
  return orbit_minimize(b.rep, r, nullptr) <= tol;
}

Flag boundary_flag(const Vec3& v, const Row3& phi, double tol) {
  double nv = v.norm(), np = phi.norm();
  if (nv == 0.0 || np == 0.0) throw Error(Errc::NotOnBoundary, "zero line or covector");
  Vec3 vh = v / nv;
  Row3 ph = phi / np;
  double pair = std::abs((ph * vh)(0, 0));
  if (pair > tol) throw Error(Errc::NotOnBoundary, "|phi(v)| = " + std::to_string(pair));
  return {vh, ph};
}

}  // namespace bct

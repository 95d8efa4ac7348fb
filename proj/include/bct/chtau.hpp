#pragma once

// The bi-complex hyperbolic plane: the quadric q(z,z) = -1 in C^3_tau modulo
// unit tau-norm scalars, and its incidence model in CP^2 x CP^2*.

#include "bct/bicomplex.hpp"

namespace bct {

// q(z, w) = z^T Q conj_tau(w)
Bicomplex q_form(const BcVec3& z, const BcVec3& w);
// Re_tau q, the ambient complex metric g.
inline cd g_form(const BcVec3& z, const BcVec3& w) { return re_tau(q_form(z, w)); }

struct HyperboloidPoint {
  BcVec3 rep;

  // Scales z by a bi-complex factor so that q(z,z) = -1. Requires both
  // idempotent parts of q(z,z) to be nonzero.
  static HyperboloidPoint normalize(const BcVec3& z);
  // Wraps an already-normalized representative; throws NotInImage otherwise.
  static HyperboloidPoint from_rep(const BcVec3& z, double tol = 1e-12);
};

struct IncidencePoint {
  Vec3 v;
  Row3 phi;
};

struct TangentVector {
  HyperboloidPoint base;
  BcVec3 vec;
};

struct Flag {
  Vec3 line;   // unit representative of a projective line
  Row3 plane;  // unit covector; the plane is its kernel
};

IncidencePoint to_incidence(const HyperboloidPoint& p);
// Inverse map; rescales v so that phi(v) = -1 first.
HyperboloidPoint from_incidence(const IncidencePoint& ip);

// Phi(A) . p
HyperboloidPoint act(const BcMat3& X, const HyperboloidPoint& p);

// Two points coincide when their reps differ by a unit tau-norm scalar.
bool same_point(const HyperboloidPoint& a, const HyperboloidPoint& b, double tol = 1e-9);

TangentVector project_tangent(const HyperboloidPoint& p, const BcVec3& V);

TangentVector apply_I(const TangentVector& X);
TangentVector apply_P(const TangentVector& X);
TangentVector apply_J(const TangentVector& X);

struct ParaHermitian {
  cd g;
  cd omega;
};
// (Re_tau q(X,Y), Im_tau q(X,Y)). Throws BaseMismatch.
ParaHermitian para_hermitian_eval(const TangentVector& X, const TangentVector& Y);

// Sectional curvature of the plane (X, Y) of the quotient metric, from the
// ambient second fundamental form II(X,Y) = q(Y,X) z: its symmetric part is
// the normal of the quadric, its skew part the vertical (O'Neill) term.
cd sectional_ambient(const TangentVector& X, const TangentVector& Y);
// Sec(X, PX). Throws IsotropicPlane when |g(X,X)| < 1e-10.
cd para_holo_sectional(const HyperboloidPoint& p, const TangentVector& X);

// Closed-form curvature tensor of a para-Hermitian metric of constant
// para-holomorphic sectional curvature k.
cd riemann_closed_form(double k, const TangentVector& X, const TangentVector& Y,
                       const TangentVector& Z, const TangentVector& W);

enum class RealForm { H2tau, CH2, X };

struct Membership {
  bool h2tau = false;
  bool ch2 = false;
  bool x = false;
  bool generic() const { return !h2tau && !ch2 && !x; }
};

// Smallest violation of the real-form condition over the orbit
// u = cosh v + tau sinh v; `best` receives the minimizing representative.
double orbit_residual(const HyperboloidPoint& p, RealForm form, BcVec3* best = nullptr);
Membership submanifold_membership(const HyperboloidPoint& p, double tol = 1e-9);

// Throws NotOnBoundary when |phi(v)| > tol after normalizing v and phi.
Flag boundary_flag(const Vec3& v, const Row3& phi, double tol = 1e-10);

}  // namespace bct

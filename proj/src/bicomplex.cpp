#include "bct/bicomplex.hpp"

#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

#include "bct/errors.hpp"

namespace bct {

Bicomplex tau_conj(const Bicomplex& w) { return Bicomplex::idem(w.minus(), w.plus()); }

cd tau_norm(const Bicomplex& w) { return w.plus() * w.minus(); }

Bicomplex invert(const Bicomplex& w) {
  if (std::abs(w.plus()) <= kZeroDivisorTol || std::abs(w.minus()) <= kZeroDivisorTol)
    throw Error(Errc::ZeroDivisor, "idempotent component vanishes");
  return Bicomplex::idem(1.0 / w.plus(), 1.0 / w.minus());
}

Bicomplex operator/(const Bicomplex& a, const Bicomplex& b) { return a * invert(b); }

Bicomplex bc_exp(const Bicomplex& w) { return Bicomplex::idem(std::exp(w.plus()), std::exp(w.minus())); }

Bicomplex bc_sqrt(const Bicomplex& w) { return Bicomplex::idem(std::sqrt(w.plus()), std::sqrt(w.minus())); }

BcVec3 tau_conj(const BcVec3& v) { return {v.minus, v.plus}; }

BcMat3 tau_conj(const BcMat3& x) { return {x.minus, x.plus}; }

BcMat3 inverse(const BcMat3& x) {
  Bicomplex d = x.det();
  if (std::abs(d.plus()) <= kZeroDivisorTol || std::abs(d.minus()) <= kZeroDivisorTol)
    throw Error(Errc::Singular, "bi-complex matrix is not invertible");
  return {x.plus.inverse(), x.minus.inverse()};
}

BcMat3 expm(const BcMat3& x) {
  Mat3 p = x.plus.exp();
  Mat3 m = x.minus.exp();
  return {p, m};
}

const Mat3& Qmat() {
  static const Mat3 q = Eigen::Vector3cd(1.0, 1.0, -1.0).asDiagonal();
  return q;
}

BcMat3 phi_iso(const Mat3& A) {
  if (std::abs(A.determinant()) < 1e-12) throw Error(Errc::Singular, "|det A| < 1e-12");
  const Mat3& Q = Qmat();
  return {A, Q * A.inverse().transpose() * Q};
}

double phi_compat_residual(const BcMat3& X) {
  if (std::abs(X.plus.determinant()) < 1e-300) return std::numeric_limits<double>::infinity();
  const Mat3& Q = Qmat();
  return (X.minus - Q * X.plus.inverse().transpose() * Q).cwiseAbs().maxCoeff();
}

Mat3 phi_inv(const BcMat3& X, double tol) {
  double r = phi_compat_residual(X);
  if (!(r <= tol))
    throw Error(Errc::NotInImage, "compatibility residual " + std::to_string(r));
  return X.plus;
}

double q_preservation_residual(const BcMat3& X) {
  const Mat3& Q = Qmat();
  double rp = (X.plus.transpose() * Q * X.minus - Q).cwiseAbs().maxCoeff();
  double rm = (X.minus.transpose() * Q * X.plus - Q).cwiseAbs().maxCoeff();
  return std::max(rp, rm);
}

}  // namespace bct

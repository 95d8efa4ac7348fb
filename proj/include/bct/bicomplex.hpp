#pragma once

// Bi-complex numbers C_tau = C[tau], tau^2 = 1, and 3x3 matrices over them.
//
// Every value is held in the idempotent basis e+ = (1+tau)/2, e- = (1-tau)/2,
// where the algebra is simply C x C. The (1, tau) coefficients are computed on
// request: z1 = (z+ + z-)/2, z2 = (z+ - z-)/2.

#include <complex>

#include <Eigen/Dense>

namespace bct {

using cd = std::complex<double>;
using Mat3 = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3cd;
using Row3 = Eigen::RowVector3cd;

inline constexpr double kZeroDivisorTol = 1e-14;

class Bicomplex {
 public:
  Bicomplex() = default;
  Bicomplex(double x) : p_(x), m_(x) {}
  Bicomplex(cd z1, cd z2 = cd(0.0)) : p_(z1 + z2), m_(z1 - z2) {}

  static Bicomplex idem(cd plus, cd minus) {
    Bicomplex w;
    w.p_ = plus;
    w.m_ = minus;
    return w;
  }
  static Bicomplex tau() { return idem(1.0, -1.0); }
  static Bicomplex e_plus() { return idem(1.0, 0.0); }
  static Bicomplex e_minus() { return idem(0.0, 1.0); }

  cd z1() const { return 0.5 * (p_ + m_); }
  cd z2() const { return 0.5 * (p_ - m_); }
  cd plus() const { return p_; }
  cd minus() const { return m_; }

  Bicomplex operator-() const { return idem(-p_, -m_); }
  Bicomplex& operator+=(const Bicomplex& o) { p_ += o.p_; m_ += o.m_; return *this; }
  Bicomplex& operator-=(const Bicomplex& o) { p_ -= o.p_; m_ -= o.m_; return *this; }
  Bicomplex& operator*=(const Bicomplex& o) { p_ *= o.p_; m_ *= o.m_; return *this; }

  friend Bicomplex operator+(Bicomplex a, const Bicomplex& b) { return a += b; }
  friend Bicomplex operator-(Bicomplex a, const Bicomplex& b) { return a -= b; }
  friend Bicomplex operator*(Bicomplex a, const Bicomplex& b) { return a *= b; }
  friend Bicomplex operator*(cd s, const Bicomplex& b) { return idem(s * b.p_, s * b.m_); }
  friend Bicomplex operator*(const Bicomplex& b, cd s) { return s * b; }
  friend Bicomplex operator*(double s, const Bicomplex& b) { return idem(s * b.p_, s * b.m_); }

 private:
  cd p_{0.0};
  cd m_{0.0};
};

Bicomplex tau_conj(const Bicomplex& w);
cd tau_norm(const Bicomplex& w);
// Throws ZeroDivisor when either idempotent component has modulus <= 1e-14.
Bicomplex invert(const Bicomplex& w);
Bicomplex operator/(const Bicomplex& a, const Bicomplex& b);
inline cd re_tau(const Bicomplex& w) { return w.z1(); }
inline cd im_tau(const Bicomplex& w) { return w.z2(); }
Bicomplex bc_exp(const Bicomplex& w);
Bicomplex bc_sqrt(const Bicomplex& w);

struct BcVec3 {
  Vec3 plus = Vec3::Zero();
  Vec3 minus = Vec3::Zero();

  BcVec3() = default;
  BcVec3(const Vec3& p, const Vec3& m) : plus(p), minus(m) {}
  // Build from coefficient vectors of 1 and tau.
  static BcVec3 from_z(const Vec3& z1, const Vec3& z2) { return {z1 + z2, z1 - z2}; }

  Vec3 z1() const { return 0.5 * (plus + minus); }
  Vec3 z2() const { return 0.5 * (plus - minus); }
  Bicomplex operator[](int i) const { return Bicomplex::idem(plus(i), minus(i)); }
  void set(int i, const Bicomplex& w) { plus(i) = w.plus(); minus(i) = w.minus(); }

  BcVec3 operator-() const { return {-plus, -minus}; }
  friend BcVec3 operator+(const BcVec3& a, const BcVec3& b) { return {a.plus + b.plus, a.minus + b.minus}; }
  friend BcVec3 operator-(const BcVec3& a, const BcVec3& b) { return {a.plus - b.plus, a.minus - b.minus}; }
  friend BcVec3 operator*(const Bicomplex& s, const BcVec3& v) { return {s.plus() * v.plus, s.minus() * v.minus}; }
  double max_abs() const { return std::max(plus.cwiseAbs().maxCoeff(), minus.cwiseAbs().maxCoeff()); }
};

BcVec3 tau_conj(const BcVec3& v);

struct BcMat3 {
  Mat3 plus = Mat3::Zero();
  Mat3 minus = Mat3::Zero();

  BcMat3() = default;
  BcMat3(const Mat3& p, const Mat3& m) : plus(p), minus(m) {}
  static BcMat3 identity() { return {Mat3::Identity(), Mat3::Identity()}; }
  static BcMat3 zero() { return {}; }
  static BcMat3 from_z(const Mat3& z1, const Mat3& z2) { return {z1 + z2, z1 - z2}; }

  Mat3 z1() const { return 0.5 * (plus + minus); }
  Mat3 z2() const { return 0.5 * (plus - minus); }
  Bicomplex operator()(int i, int j) const { return Bicomplex::idem(plus(i, j), minus(i, j)); }
  void set(int i, int j, const Bicomplex& w) { plus(i, j) = w.plus(); minus(i, j) = w.minus(); }

  BcMat3 operator-() const { return {-plus, -minus}; }
  BcMat3& operator+=(const BcMat3& o) { plus += o.plus; minus += o.minus; return *this; }
  BcMat3& operator-=(const BcMat3& o) { plus -= o.plus; minus -= o.minus; return *this; }
  friend BcMat3 operator+(BcMat3 a, const BcMat3& b) { return a += b; }
  friend BcMat3 operator-(BcMat3 a, const BcMat3& b) { return a -= b; }
  friend BcMat3 operator*(const BcMat3& a, const BcMat3& b) { return {a.plus * b.plus, a.minus * b.minus}; }
  friend BcVec3 operator*(const BcMat3& a, const BcVec3& v) { return {a.plus * v.plus, a.minus * v.minus}; }
  friend BcMat3 operator*(const Bicomplex& s, const BcMat3& a) { return {s.plus() * a.plus, s.minus() * a.minus}; }
  friend BcMat3 operator*(cd s, const BcMat3& a) { return {s * a.plus, s * a.minus}; }
  friend BcMat3 operator*(double s, const BcMat3& a) { return {s * a.plus, s * a.minus}; }

  BcMat3 transpose() const { return {plus.transpose(), minus.transpose()}; }
  Bicomplex det() const { return Bicomplex::idem(plus.determinant(), minus.determinant()); }
  Bicomplex trace() const { return Bicomplex::idem(plus.trace(), minus.trace()); }
  double max_abs() const { return std::max(plus.cwiseAbs().maxCoeff(), minus.cwiseAbs().maxCoeff()); }
};

BcMat3 tau_conj(const BcMat3& x);
BcMat3 inverse(const BcMat3& x);
// Matrix exponential of each idempotent part (scaling and squaring, Pade 13).
BcMat3 expm(const BcMat3& x);

const Mat3& Qmat();  // diag(1, 1, -1)

// Phi(A) = A e+ + Q (A^{-1})^T Q e-. Throws Singular when |det A| < 1e-12.
BcMat3 phi_iso(const Mat3& A);
// max-abs of X- - Q (X+^{-1})^T Q, or +inf when X+ is singular.
double phi_compat_residual(const BcMat3& X);
// Returns X+; throws NotInImage when the compatibility residual exceeds tol.
Mat3 phi_inv(const BcMat3& X, double tol = 1e-9);
// max-abs of X^T Q conj_tau(X) - Q over both idempotent parts.
double q_preservation_residual(const BcMat3& X);

}  // namespace bct

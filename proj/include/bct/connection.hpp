#pragma once

// The flat sl(3, C_tau) connection Omega = (A/d_w z) dz + (B/d_zb wb) dwb of
// a complex Lagrangian minimal surface, written in the frame
// {e1 = sigma_zb/s, e2 = sigma_w/s, sigma}.

#include <string>
#include <utility>
#include <vector>

#include "bct/bicomplex.hpp"
#include "bct/metric.hpp"

namespace bct {

struct MatField {
  TorusGrid grid;
  std::vector<BcMat3> v;

  MatField() = default;
  explicit MatField(TorusGrid g) : grid(g), v(g.size(), BcMat3::zero()) {}

  BcMat3& operator()(int i, int j) { return v[grid.idx(i, j)]; }
  const BcMat3& operator()(int i, int j) const { return v[grid.idx(i, j)]; }
  double max_abs() const;
  // One idempotent part of entry (r, c) as a scalar field.
  Field entry(int r, int c, bool plus) const;
  void set_entry(int r, int c, bool plus, const Field& f);
};

MatField operator+(const MatField& a, const MatField& b);
MatField operator-(const MatField& a, const MatField& b);
MatField scale(const Field& f, const MatField& m);  // f * m node-wise
MatField d_zb(const MatField& m);
MatField d_w(const BeltramiChart& chart, const MatField& m);

// Frame-basis orthogonal structure: e1, e2 isotropic and paired, q(sigma, sigma) = -1.
const Mat3& Qtilde();
// Frame-basis J-Hermitian pairing: swaps e1 and e2, sigma has norm 1.
const Mat3& Htilde();

struct FlatConnectionField {
  MatField Ahat;
  MatField Bhat;
  BeltramiChart chart;
  Field s2;

  TorusGrid grid() const { return chart.grid; }
  // Omega evaluated on d/dx and d/dy at node (i, j).
  BcMat3 omega_x(int i, int j) const;
  BcMat3 omega_y(int i, int j) const;
};

FlatConnectionField assemble(const Field& psi, const CubicPair& C, const BeltramiChart& chart);

// Max-abs over nodes of trace(A), trace(B) and of the infinitesimal
// orthogonality defect X^T Qt + Qt conj_tau(X) for X = A, B.
double invariant_residual(const FlatConnectionField& conn);

// B_w - logB B - A_zb + logA A + [A, B]
MatField maurer_cartan_residual(const FlatConnectionField& conn);

struct ReducedSystem {
  Field r0;  // s^2 (Delta_h psi + 8||C||_h^2 - 1)
  Field r1;  // tau-coefficient: alpha_zb (d_w z)^3 / s^2
  Field r2;  // tau-coefficient: (d_w conj(beta)) (d_zb wb)^3 / s^2
};
ReducedSystem reduced_system_residual(const Field& psi, const CubicPair& C, const BeltramiChart& chart);

// A closed lattice path of unit grid steps starting at a node.
struct Loop {
  int i0 = 0, j0 = 0;
  std::vector<std::pair<int, int>> steps;  // each (+-1, 0) or (0, +-1)

  static Loop x_period(int n, int i0 = 0, int j0 = 0);
  static Loop y_period(int n, int i0 = 0, int j0 = 0);
  // Throws ConfigError unless every step is a unit step and the path closes
  // up to a lattice vector.
  void validate(int n) const;
};

enum class Basis { Frame, Standard };

// Path-ordered product of exp(h Omega(midpoint)) along the loop. In the
// standard basis the result is conjugated by the base frame F0, whose
// columns e1 = (1, i, 0)/sqrt2, e2 = conj(e1), sigma = (0, 0, 1) carry Qt to
// Q and are compatible with the real structure of Hitchin-locus data.
BcMat3 holonomy(const FlatConnectionField& conn, const Loop& loop, Basis basis = Basis::Standard,
                bool* flatness_warning = nullptr);
BcMat3 frame_to_standard(const BcMat3& X);
const BcMat3& base_frame();

struct Sl3Result {
  Mat3 M;
  double det_defect;  // |det M - 1|
};
// Throws NotInImage when X- differs from Q (X+^{-1})^T Q by more than 1e-8.
Sl3Result to_sl3(const BcMat3& X);

struct HiggsData {
  BcMat3 metricH;
  MatField dH10, dH01;    // Htilde-skew parts of the dz and dwb coefficients
  MatField phi10, phi01;  // Htilde-symmetric parts
};

// Htilde-adjoint X -> Ht X^T Ht.
BcMat3 h_adjoint(const BcMat3& X);
HiggsData higgs_split(const FlatConnectionField& conn);

struct HiggsResiduals {
  MatField holomorphic;  // -Phi_zb + logA Phi + [Phi, D] on the (1,0) Higgs field
  MatField curvature;    // skew part of the flatness equation
};
// Both are written with the hat matrices so that they compare directly to
// the symmetric / skew parts of maurer_cartan_residual.
HiggsResiduals higgs_residuals(const FlatConnectionField& conn);

}  // namespace bct

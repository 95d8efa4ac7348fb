#pragma once

// Space-like minimal Lagrangians in H^2_tau as dual pairs of hyperbolic
// affine spheres f+ : U -> R^3, f- : U -> (R^3)*.
//
// The affine maps are not periodic (the holonomy acts on them), so they live
// on a patch: the n x n core of the torus grid plus `ghost` layers of nodes
// on every side. Indices run over [-ghost, n + ghost).

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "bct/connection.hpp"

namespace bct {

using Vec3d = Eigen::Vector3d;
using Mat2d = Eigen::Matrix2d;

template <class T>
struct Patch {
  int n = 0;
  int ghost = 0;
  double h = 0.0;
  std::vector<T> v;

  Patch() = default;
  Patch(int n_, int ghost_, double h_, const T& init) : n(n_), ghost(ghost_), h(h_), v(size_t(m()) * m(), init) {}

  int m() const { return n + 2 * ghost; }
  T& at(int i, int j) { return v[size_t(j + ghost) * m() + (i + ghost)]; }
  const T& at(int i, int j) const { return v[size_t(j + ghost) * m() + (i + ghost)]; }
};

// f+ as a vector; f- by its covector components, so eta(v, phi) = phi . v.
struct AffinePair {
  Patch<Vec3d> fplus;
  Patch<Vec3d> fminus;

  int n() const { return fplus.n; }
  int ghost() const { return fplus.ghost; }
  double h() const { return fplus.h; }
};

// Max over core nodes of |eta(f+, f-) + 1|.
double pairing_defect(const AffinePair& pair);
// Max over core nodes of |eta(f+_x, f-)| and |eta(f+_y, f-)|.
double conormal_defect(const AffinePair& pair);

struct NormalizeReport {
  Field mu;           // potential applied to the core (zero mean)
  double curl = 0.0;  // max-abs curl of F on the core
  double threshold = 0.0;
};

// Rescales (f+, f-) -> (e^mu f+, e^-mu f-) with grad mu = F,
// F = (eta(f+_x, f-), eta(f+_y, f-)), by a periodic Poisson solve on the
// core. Throws NotIsotropic when curl F exceeds 10 h^2 (field scale).
AffinePair normalize_lift(const AffinePair& pair, NormalizeReport* report = nullptr);

struct FrameReport {
  double path_residual = 0.0;     // row-then-column vs column-then-row, relative
  double reality_residual = 0.0;  // max |conj(Omega) - S Omega S|
  double imag_residual = 0.0;     // max imaginary part of the lift
};

// Integrates dF = F Omega from the base frame and splits the sigma column
// into (f+, f-). Throws NotReal when Omega fails the real structure of
// Hitchin-locus data by more than 1e-10 (relative), PathDependent when the
// two integration orders differ by more than path_tol.
AffinePair integrate_frame(const FlatConnectionField& conn, int ghost = 3, double path_tol = 1e-3,
                           FrameReport* report = nullptr);

// Omega with the idempotent parts exchanged.
FlatConnectionField tau_swapped(const FlatConnectionField& conn);

struct BlaschkeData {
  int n = 0;
  double h = 0.0;
  std::vector<Mat2d> gB;
  std::vector<std::array<double, 8>> pickC;  // C_ijk at index 4i + 2j + k, symmetrized
  std::vector<Mat2d> shapeS;                 // D_X xi = -S(X) in the frame
  std::vector<double> K;                     // curvature of gB
  std::vector<Vec3d> xi;                     // affine normal
};

struct StructureReport {
  BlaschkeData data;
  double xi_residual = 0.0;     // max |xi - f| / |f|
  double S_residual = 0.0;      // max-abs of S + Id
  double pick_symmetry = 0.0;   // max-abs of C_ijk - C_jik, C_ijk - C_ikj before symmetrizing
  double pick_trace = 0.0;      // max-abs of tr A(d_i)
};

// Blaschke structure of f (the f+ side, or f- read as a map into R^3) from
// finite differences on the patch; needs ghost >= 3.
// Throws DegenerateFrame when |det(f_x, f_y, f)| < 1e-10 at a core node.
StructureReport structure_residuals(const AffinePair& pair, bool minus_side = false);

struct WangCheck {
  std::vector<double> residual;  // K - 2||q||^2 + 1
  std::vector<cd> q;             // q(d_z, d_z, d_z) for the coordinate z = x + iy
};
// ||q||^2 = |C|^2_g / 4 for the traceless symmetric Pick tensor C.
WangCheck pick_and_wang(const BlaschkeData& data);
// Max over core nodes of |C+ + C-|.
double pick_dual_residual(const BlaschkeData& plus, const BlaschkeData& minus);

struct SecondVariation {
  Field curvature;  // tr R(PZ, ., PZ, .)
  Field shape;      // -tr g(B_PZ ., B_PZ .)
  Field normal;     // tr g_N(nabla^N PZ, nabla^N PZ)
  Field total;
};

// Curvature of H^2_tau in an orthonormal model T + PT of the tangent space,
// g = diag(1, 1, -1, -1), P swapping the blocks, constant para-holomorphic
// sectional curvature k.
double model_riemann(double k, const Eigen::Vector4d& X, const Eigen::Vector4d& Y, const Eigen::Vector4d& Z,
                     const Eigen::Vector4d& W);

// tr_{g_I} T_{PZ} for a real tangent field Z = Zx d_x + Zy d_y over
// Hitchin-locus data h = 2 e^{2psi} |dz|^2, C = alpha dz^3 + conj(alpha) dzb^3.
SecondVariation second_variation_trace(const Field& Zx, const Field& Zy, const Field& psi, const Field& alpha);

}  // namespace bct

#pragma once

// Discrete calculus for positive complex metrics h = 2 e^{2 psi} dz dwb on
// the unit torus, where w is a second coordinate described by its Beltrami
// data relative to z.

#include <functional>

#include "bct/grid.hpp"
#include "bct/stencil.hpp"

namespace bct {

struct BeltramiChart {
  TorusGrid grid;
  Field mu;     // -w_zb / w_z
  Field dwz;    // d_w z
  Field dzbwb;  // d_zb wb
  Field logA;   // d_zb log(d_w z)
  Field logB;   // d_w log(d_zb wb)

  // w = z - mu zb. Throws ConfigError when |mu| >= 1.
  static BeltramiChart constant(TorusGrid g, cd mu);
  // From the partial derivatives w_z, w_zb of a map w(x, y).
  static BeltramiChart from_map(TorusGrid g, const std::function<cd(double, double)>& wz,
                                const std::function<cd(double, double)>& wzb);
  // From user-supplied (mu, d_w z, d_zb wb) fields.
  static BeltramiChart from_fields(Field mu, Field dwz, Field dzbwb);

  double sup_mu() const { return mu.max_abs(); }
  bool is_flat() const;  // mu, dwz, dzbwb constant
};

// d_w = (d_w z)(d_z + conj(mu) d_zb), centered differences.
Field d_w(const BeltramiChart& chart, const Field& f);

// Max of the algebraic identity |dwz conj(dzbwb)(1-|mu|^2) - 1| and the
// integrability defect d_zb(w_z) - d_z(w_zb) of the reconstructed w.
double consistency_residual(const BeltramiChart& chart);

struct ComplexMetric {
  Field psi;
  BeltramiChart chart;

  Field s2() const;  // e^{2 psi} (d_w z)(d_zb wb)
  TorusGrid grid() const { return psi.grid; }
};

struct CubicPair {
  Field alpha;  // q1 = alpha dz^3
  Field beta;   // q2 = beta dw^3
};

// Max-abs of d_zb alpha and d_w beta.
double holomorphy_residual(const CubicPair& C, const BeltramiChart& chart);

// (logA, logB): [d_zb, d_w] = logA d_w - logB d_zb.
std::pair<Field, Field> commutator_coeffs(const BeltramiChart& chart);

// Coefficients of Delta_h in the mu-form,
//   (2 e^{-2psi} / dzbwb) [phi_zzb + conj(mu) phi_zbzb + conj(mu)_zb phi_zb].
OpCoeffs laplacian_coeffs(const ComplexMetric& h);
Field laplacian(const ComplexMetric& h, const Field& phi);
Field curvature(const ComplexMetric& h);
Field cubic_norm(const ComplexMetric& h, const CubicPair& C);
// Area element 2 e^{2psi} dzbwb dx dy, summed in fixed row-major order.
cd area_integrate(const ComplexMetric& h, const Field& f);
bool symbol_check(cd mu);
// Smallest |sigma(xi)| over unit directions; 360 samples refined locally.
double symbol_min(cd mu);

struct Christoffel {
  Field w_zbw;    // Gamma^w_{zb w}
  Field zb_wzb;   // Gamma^zb_{w zb}
  Field zb_zbzb;  // Gamma^zb_{zb zb}
  Field w_ww;     // Gamma^w_{w w}
};
Christoffel christoffel(const ComplexMetric& h);

}  // namespace bct

#pragma once

// Reference computations that share no code path with the library: closed
// forms, a discrete-exterior-calculus construction of d(dphi o J), a Taylor
// matrix exponential and an explicit hyperboloid.

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "bct/affine.hpp"
#include "bct/metric.hpp"

namespace bct::oracle {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// phi = A sin(2 pi x) cos(2 pi y) and its partial derivatives.
struct TrigJet {
  double f, x, y, xx, yy, xy;
};

inline TrigJet trig_jet(double A, double x, double y) {
  const double s = std::sin(kTwoPi * x), c = std::cos(kTwoPi * x);
  const double sy = std::sin(kTwoPi * y), cy = std::cos(kTwoPi * y);
  const double k2 = kTwoPi * kTwoPi;
  return {A * s * cy, A * kTwoPi * c * cy, -A * kTwoPi * s * sy, -A * k2 * s * cy, -A * k2 * s * cy, -A * k2 * c * sy};
}

inline Field trig_field(TorusGrid g, double A) {
  return Field::from_fn(g, [A](double x, double y) { return cd(trig_jet(A, x, y).f); });
}

// Delta_h psi for psi = A sin cos over the chart w = z - mu zb, written in the
// (w, zb) coordinates: Delta_h = 2 e^{-2psi} d_w d_zb / (d_w z d_zb wb), with
// d_w = (d_z + conj(mu) d_zb) / (1 - |mu|^2) and d_zb wb = 1.
inline cd constant_chart_laplacian(cd mu, double A, double x, double y) {
  const TrigJet d = trig_jet(A, x, y);
  const double dwz = 1.0 / (1.0 - std::norm(mu));
  const cd pzzb = 0.25 * (d.xx + d.yy);
  const cd pzbzb = 0.25 * cd(d.xx - d.yy, 2.0 * d.xy);
  const cd pwzb = dwz * (pzzb + std::conj(mu) * pzbzb);
  return std::exp(-2.0 * d.f) / dwz * 2.0 * pwzb;
}

// d(dphi o J) / (dx ^ dy) on the dual cells of the grid. The 1-form
//   dphi o J = -i (phi_z + 2 conj(mu) phi_zb) dz + i phi_zb dzb
// is sampled at edge midpoints (compact difference along the edge, the
// average of the two centered differences across it, mu averaged), and the
// exterior derivative is the circulation around the dual cell over h^2.
inline Field dec_stokes(const BeltramiChart& chart, const Field& phi) {
  const TorusGrid g = phi.grid;
  const int n = g.n;
  const double h = g.h();
  const cd I(0.0, 1.0);
  auto cx = [&](int i, int j) { return (phi(i + 1, j) - phi(i - 1, j)) / (2.0 * h); };
  auto cy = [&](int i, int j) { return (phi(i, j + 1) - phi(i, j - 1)) / (2.0 * h); };
  auto form = [&](cd px, cd py, cd mub) {
    const cd pz = 0.5 * (px - I * py), pzb = 0.5 * (px + I * py);
    const cd a = -I * (pz + 2.0 * mub * pzb), b = I * pzb;
    return std::pair<cd, cd>{a + b, I * (a - b)};
  };
  // alpha_y on the x-edge from (i, j) to (i + 1, j).
  auto ay = [&](int i, int j) {
    const cd px = (phi(i + 1, j) - phi(i, j)) / h;
    const cd py = 0.5 * (cy(i, j) + cy(i + 1, j));
    const cd mub = std::conj(0.5 * (chart.mu(i, j) + chart.mu(i + 1, j)));
    return form(px, py, mub).second;
  };
  // alpha_x on the y-edge from (i, j) to (i, j + 1).
  auto ax = [&](int i, int j) {
    const cd py = (phi(i, j + 1) - phi(i, j)) / h;
    const cd px = 0.5 * (cx(i, j) + cx(i, j + 1));
    const cd mub = std::conj(0.5 * (chart.mu(i, j) + chart.mu(i, j + 1)));
    return form(px, py, mub).first;
  };
  Field out(g);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out(i, j) = ((ay(i, j) - ay(i - 1, j)) - (ax(i, j) - ax(i, j - 1))) / h;
  return out;
}

// Truncated Taylor series with scaling and squaring.
inline Eigen::Matrix3cd expm_taylor(const Eigen::Matrix3cd& X) {
  int s = 0;
  double nrm = X.cwiseAbs().rowwise().sum().maxCoeff();
  while (nrm > 0.25) {
    nrm *= 0.5;
    ++s;
  }
  const Eigen::Matrix3cd Y = X / std::pow(2.0, s);
  Eigen::Matrix3cd sum = Eigen::Matrix3cd::Identity(), term = Eigen::Matrix3cd::Identity();
  for (int k = 1; k < 30; ++k) {
    term = term * Y / double(k);
    sum += term;
  }
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum;
}

// The hyperboloid X^2 + Y^2 - Z^2 = -1 as a graph over (X, Y) = r (x, y),
// with its conormal f- = diag(1, 1, -1) f so that eta(f+, f-) = -1. Its
// affine normal is f, the shape operator is the identity, the Pick tensor
// vanishes and the Blaschke metric has curvature -1.
inline AffinePair hyperboloid_patch(int n, int ghost, double r) {
  const double h = 1.0 / n;
  AffinePair p{Patch<Vec3d>(n, ghost, h, Vec3d::Zero()), Patch<Vec3d>(n, ghost, h, Vec3d::Zero())};
  for (int j = -ghost; j < n + ghost; ++j)
    for (int i = -ghost; i < n + ghost; ++i) {
      const double X = r * (i * h - 0.5), Y = r * (j * h - 0.5);
      const Vec3d f(X, Y, std::sqrt(1.0 + X * X + Y * Y));
      p.fplus.at(i, j) = f;
      p.fminus.at(i, j) = Vec3d(f(0), f(1), -f(2));
    }
  return p;
}

}  // namespace bct::oracle

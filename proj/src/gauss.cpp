#include "bct/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bct/errors.hpp"
#include "bct/linsolve.hpp"

namespace bct {

namespace {

double max_abs(const Field& f) { return f.max_abs(); }

Field linear_term(const Field& psi, const Field& c) {
  Field d(psi.grid);
  for (size_t q = 0; q < d.v.size(); ++q)
    d.v[q] = -2.0 * std::exp(2.0 * psi.v[q]) - 32.0 * std::exp(-4.0 * psi.v[q]) * c.v[q];
  return d;
}

}  // namespace

Field project_holomorphic(const Field& f) {
  const int n = f.n();
  cd s00 = 0.0, s10 = 0.0, s01 = 0.0, s11 = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double sx = (i % 2) ? -1.0 : 1.0, sy = (j % 2) ? -1.0 : 1.0;
      cd z = f(i, j);
      s00 += z;
      s10 += sx * z;
      s01 += sy * z;
      s11 += sx * sy * z;
    }
  const double inv = 1.0 / (static_cast<double>(n) * n);
  Field out(f.grid);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double sx = (i % 2) ? -1.0 : 1.0, sy = (j % 2) ? -1.0 : 1.0;
      out(i, j) = inv * (s00 + sx * s10 + sy * s01 + sx * sy * s11);
    }
  return out;
}

double constant_root(double c, double Kg) {
  auto f = [&](double u) { return -Kg - u + 8.0 * c / (u * u); };
  if (c < 0.0) throw Error(Errc::NoPositiveRoot, "negative cubic norm");
  if (c == 0.0) {
    if (-Kg > 0.0) return -Kg;
    throw Error(Errc::NoPositiveRoot, "c = 0 and Kg >= 0");
  }
  // f decreases strictly on (0, inf) and blows up at 0+, so the root is unique.
  double lo = 1e-12, hi = 1.0;
  while (f(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e200) throw Error(Errc::NoPositiveRoot, "no sign change");
  }
  while (f(lo) < 0.0) lo *= 0.5;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  double u = 0.5 * (lo + hi);
  for (int it = 0; it < 5; ++it) {
    double df = -1.0 - 16.0 * c / (u * u * u);
    double un = u - f(u) / df;
    if (!(un > 0.0)) break;
    u = un;
  }
  return u;
}

GaussProblem make_problem(ComplexMetric background, Field Kg, CubicPair C) {
  for (const cd& m : background.chart.mu.v)
    if (!symbol_check(m)) throw Error(Errc::ConfigError, "Laplacian symbol degenerates: |mu| = 1");
  GaussProblem pb{std::move(background), std::move(Kg), std::move(C), Field()};
  Field c = cubic_norm(pb.background, pb.C);
  double cm = c.mean().real();
  double km = pb.Kg.mean().real();
  double psi0 = 0.0;
  try {
    psi0 = 0.5 * std::log(constant_root(std::max(cm, 0.0), km));
  } catch (const Error&) {
    psi0 = 0.0;
  }
  pb.initial = Field(pb.background.grid(), psi0);
  return pb;
}

Field residual_background(const Field& psi, const GaussProblem& pb) {
  Field lap = laplacian(pb.background, psi);
  Field c = cubic_norm(pb.background, pb.C);
  Field r(psi.grid);
  for (size_t q = 0; q < r.v.size(); ++q)
    r.v[q] = lap.v[q] - pb.Kg.v[q] - std::exp(2.0 * psi.v[q]) + 8.0 * std::exp(-4.0 * psi.v[q]) * c.v[q];
  return r;
}

Field residual_intrinsic(const Field& psi, const GaussProblem& pb) {
  if (pb.background.psi.max_abs() != 0.0)
    throw Error(Errc::ChartMismatch, "background conformal factor must vanish");
  ComplexMetric h{psi, pb.background.chart};
  Field lap = laplacian(h, psi);
  Field c = cubic_norm(h, pb.C);
  Field r(psi.grid);
  for (size_t q = 0; q < r.v.size(); ++q) r.v[q] = lap.v[q] + 8.0 * c.v[q] - 1.0;
  return r;
}

SolveReport solve_newton(const GaussProblem& pb, const SolveOptions& opt) {
  SolveReport rep;
  rep.psi = pb.initial.v.empty() ? Field(pb.background.grid(), 0.0) : pb.initial;
  const Field c = cubic_norm(pb.background, pb.C);
  OpCoeffs op = laplacian_coeffs(pb.background);

  Field r = residual_background(rep.psi, pb);
  double rn = max_abs(r);
  for (int it = 0;; ++it) {
    rep.residual_history.push_back(rn);
    if (rn <= opt.tol) {
      rep.converged = true;
      break;
    }
    if (it >= opt.max_iter) break;

    op.d = linear_term(rep.psi, c);
    Field diag = operator_diagonal(op);
    LinearOp J = [&op](const Field& x) { return apply_operator(op, x); };
    // Forcing term tied to the current residual keeps the tail quadratic.
    double rtol = std::clamp(1e-4 * rn, 1e-14, 1e-6);
    SolveStats st;
    Field delta = bicgstab(J, -r, diag, rtol, opt.linear_max_iter, &st);
    rep.linear_iterations.push_back(st.iterations);

    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k <= opt.max_halvings; ++k, t *= 0.5) {
      Field trial = rep.psi;
      for (size_t q = 0; q < trial.v.size(); ++q) trial.v[q] += t * delta.v[q];
      Field rt = residual_background(trial, pb);
      double rtn = max_abs(rt);
      if (rtn < rn) {
        rep.psi = std::move(trial);
        r = std::move(rt);
        rn = rtn;
        accepted = true;
        break;
      }
    }
    rep.iterations = it + 1;
    if (!accepted) break;
  }

  if (!rep.converged && opt.throw_on_failure) {
    std::ostringstream os;
    os << "after " << rep.iterations << " iterations, residual " << rep.residual_history.back();
    throw Error(Errc::DidNotConverge, os.str());
  }
  return rep;
}

GaussProblem wang_specialize(const Field& q, double Kg) {
  TorusGrid g = q.grid;
  ComplexMetric bg{Field(g, 0.0), BeltramiChart::constant(g, 0.0)};
  return make_problem(std::move(bg), Field(g, Kg), CubicPair{q, q});
}

Field wang_residual(const Field& psi, const Field& q) {
  ComplexMetric h{psi, BeltramiChart::constant(psi.grid, 0.0)};
  Field K = curvature(h);
  Field r(psi.grid);
  for (size_t k = 0; k < r.v.size(); ++k) {
    cd qw = 2.0 * q.v[k];
    cd norm2 = qw * std::conj(qw) / (8.0 * std::exp(6.0 * psi.v[k]));
    r.v[k] = K.v[k] - 2.0 * norm2 + 1.0;
  }
  return r;
}

}  // namespace bct

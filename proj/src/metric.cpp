#include "bct/metric.hpp"

#include <cmath>
#include <numbers>

#include "bct/errors.hpp"

namespace bct {

namespace {

void fill_log_derivatives(BeltramiChart& c) {
  c.logA = d_zb(c.dwz) / c.dwz;
  c.logB = d_w(c, c.dzbwb) / c.dzbwb;
}

void require_elliptic(const Field& mu) {
  for (const cd& m : mu.v)
    if (!(std::abs(m) < 1.0)) throw Error(Errc::ConfigError, "Beltrami coefficient with |mu| >= 1");
}

}  // namespace

BeltramiChart BeltramiChart::constant(TorusGrid g, cd mu) {
  if (!(std::abs(mu) < 1.0)) throw Error(Errc::ConfigError, "Beltrami coefficient with |mu| >= 1");
  BeltramiChart c;
  c.grid = g;
  c.mu = Field(g, mu);
  c.dwz = Field(g, 1.0 / (1.0 - std::norm(mu)));
  c.dzbwb = Field(g, 1.0);
  c.logA = Field(g, 0.0);
  c.logB = Field(g, 0.0);
  return c;
}

BeltramiChart BeltramiChart::from_map(TorusGrid g, const std::function<cd(double, double)>& wz,
                                      const std::function<cd(double, double)>& wzb) {
  Field fz = Field::from_fn(g, wz), fzb = Field::from_fn(g, wzb);
  Field mu = -(fzb / fz);
  require_elliptic(mu);
  Field dzbwb = fconj(fz);
  Field dwz(g);
  for (size_t q = 0; q < dwz.v.size(); ++q) dwz.v[q] = 1.0 / (fz.v[q] * (1.0 - std::norm(mu.v[q])));
  return from_fields(std::move(mu), std::move(dwz), std::move(dzbwb));
}

BeltramiChart BeltramiChart::from_fields(Field mu, Field dwz, Field dzbwb) {
  require_elliptic(mu);
  BeltramiChart c;
  c.grid = mu.grid;
  c.mu = std::move(mu);
  c.dwz = std::move(dwz);
  c.dzbwb = std::move(dzbwb);
  fill_log_derivatives(c);
  return c;
}

bool BeltramiChart::is_flat() const {
  auto flat = [](const Field& f) {
    for (const cd& z : f.v)
      if (z != f.v[0]) return false;
    return true;
  };
  return flat(mu) && flat(dwz) && flat(dzbwb);
}

Field d_w(const BeltramiChart& chart, const Field& f) {
  return chart.dwz * (d_z(f) + fconj(chart.mu) * d_zb(f));
}

double consistency_residual(const BeltramiChart& c) {
  double r = 0.0;
  for (size_t q = 0; q < c.mu.v.size(); ++q) {
    cd id = c.dwz.v[q] * std::conj(c.dzbwb.v[q]) * (1.0 - std::norm(c.mu.v[q])) - 1.0;
    r = std::max(r, std::abs(id));
  }
  Field wz = fconj(c.dzbwb);
  Field wzb = -(c.mu * wz);
  return std::max(r, (d_zb(wz) - d_z(wzb)).max_abs());
}

Field ComplexMetric::s2() const { return fexp(cd(2.0) * psi) * chart.dwz * chart.dzbwb; }

double holomorphy_residual(const CubicPair& C, const BeltramiChart& chart) {
  return std::max(d_zb(C.alpha).max_abs(), d_w(chart, C.beta).max_abs());
}

std::pair<Field, Field> commutator_coeffs(const BeltramiChart& chart) { return {chart.logA, chart.logB}; }

OpCoeffs laplacian_coeffs(const ComplexMetric& h) {
  const BeltramiChart& c = h.chart;
  Field a = cd(2.0) * fexp(cd(-2.0) * h.psi) / c.dzbwb;
  Field mub = fconj(c.mu);
  OpCoeffs op;
  op.b = a * mub;
  op.c = a * d_zb(mub);
  op.d = Field(h.grid(), 0.0);
  op.a = std::move(a);
  return op;
}

Field laplacian(const ComplexMetric& h, const Field& phi) { return apply_operator(laplacian_coeffs(h), phi); }

Field curvature(const ComplexMetric& h) { return -laplacian(h, h.psi); }

Field cubic_norm(const ComplexMetric& h, const CubicPair& C) {
  Field s2 = h.s2();
  Field num = C.alpha * fconj(C.beta) * fpow(h.chart.dwz, 3) * fpow(h.chart.dzbwb, 3);
  return cd(0.125) * num / fpow(s2, 3);
}

cd area_integrate(const ComplexMetric& h, const Field& f) {
  const double cell = h.grid().h() * h.grid().h();
  cd sum = 0.0;
  for (size_t q = 0; q < f.v.size(); ++q)
    sum += f.v[q] * 2.0 * std::exp(2.0 * h.psi.v[q]) * h.chart.dzbwb.v[q];
  return sum * cell;
}

double symbol_min(cd mu) {
  auto sigma = [mu](double th) {
    double c = std::cos(th), s = std::sin(th);
    return std::abs(c * c + s * s + std::conj(mu) * cd(c * c - s * s, 2.0 * c * s));
  };
  constexpr int kDirs = 360;
  const double step = std::numbers::pi / kDirs;
  int best = 0;
  double best_val = sigma(0.0);
  for (int k = 1; k < kDirs; ++k) {
    double v = sigma(k * step);
    if (v < best_val) {
      best_val = v;
      best = k;
    }
  }
  // golden-section refinement inside the neighbouring samples
  double lo = (best - 1) * step, hi = (best + 1) * step;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = sigma(x1), f2 = sigma(x2);
  for (int it = 0; it < 100; ++it) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - gr * (hi - lo); f1 = sigma(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + gr * (hi - lo); f2 = sigma(x2);
    }
  }
  return std::min({best_val, f1, f2});
}

bool symbol_check(cd mu) { return symbol_min(mu) > 1e-12 * (1.0 + std::abs(mu)); }

Christoffel christoffel(const ComplexMetric& h) {
  const BeltramiChart& c = h.chart;
  Christoffel g;
  g.w_zbw = c.logA;
  g.zb_wzb = c.logB;
  g.zb_zbzb = cd(2.0) * d_zb(h.psi) + d_zb(c.dzbwb) / c.dzbwb;
  g.w_ww = cd(2.0) * d_w(c, h.psi) + d_w(c, c.dwz) / c.dwz;
  return g;
}

}  // namespace bct

#include <doctest.h>

#include <numbers>

#include "bct/errors.hpp"
#include "bct/metric.hpp"
#include "oracles.hpp"

using namespace bct;
using oracle::kTwoPi;

namespace {

BeltramiChart shear_chart(TorusGrid g, double eps) {
  return BeltramiChart::from_map(
      g, [eps](double, double y) { return cd(1.0, -0.5 * eps * std::cos(kTwoPi * y)); },
      [eps](double, double y) { return cd(0.0, 0.5 * eps * std::cos(kTwoPi * y)); });
}

double laplacian_error(int n, cd mu) {
  const TorusGrid g = make_grid(n);
  ComplexMetric h{oracle::trig_field(g, 0.1), BeltramiChart::constant(g, mu)};
  Field L = laplacian(h, h.psi);
  double e = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      e = std::max(e, std::abs(L(i, j) - oracle::constant_chart_laplacian(mu, 0.1, g.x(i), g.y(j))));
  return e;
}

double shear_stokes_error(int n) {
  const TorusGrid g = make_grid(n);
  BeltramiChart chart = shear_chart(g, 0.3);
  ComplexMetric h{oracle::trig_field(g, 0.1), chart};
  Field lhs = oracle::dec_stokes(chart, h.psi);
  Field L = laplacian(h, h.psi);
  double e = 0.0;
  for (size_t q = 0; q < L.v.size(); ++q)
    e = std::max(e, std::abs(lhs.v[q] - L.v[q] * 2.0 * std::exp(2.0 * h.psi.v[q]) * chart.dzbwb.v[q]));
  return e;
}

}  // namespace

TEST_CASE("constant charts") {
  const TorusGrid g = make_grid(16);
  BeltramiChart c = BeltramiChart::constant(g, cd(0.3, 0.2));
  CHECK(c.is_flat());
  auto [A, B] = commutator_coeffs(c);
  CHECK(A.max_abs() == 0.0);
  CHECK(B.max_abs() == 0.0);
  CHECK(consistency_residual(c) < 1e-14);
  CHECK_THROWS_AS(BeltramiChart::constant(g, 1.0), Error);
  CHECK_THROWS_AS(BeltramiChart::constant(g, cd(0.0, 1.2)), Error);
}

TEST_CASE("shear chart is consistent and not flat") {
  BeltramiChart c = shear_chart(make_grid(64), 0.3);
  CHECK(!c.is_flat());
  CHECK(consistency_residual(c) < 1e-12);
  CHECK(std::abs(c.sup_mu() - 0.15 / std::sqrt(1.0 + 0.15 * 0.15)) < 1e-3);
}

TEST_CASE("Laplacian on constant charts converges at second order") {
  for (cd mu : {cd(0.0), cd(0.3), std::polar(0.3, std::numbers::pi / 5)}) {
    const double e64 = laplacian_error(64, mu), e128 = laplacian_error(128, mu);
    CHECK(e64 / e128 == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("Laplacian of a constant vanishes and mu = 0 reduces to the flat form") {
  const TorusGrid g = make_grid(32);
  ComplexMetric h{Field(g, 0.0), BeltramiChart::constant(g, 0.0)};
  CHECK(laplacian(h, Field(g, 2.5)).max_abs() == 0.0);
  Field phi = oracle::trig_field(g, 1.0);
  Field flat = cd(2.0) * d_zzb(phi);
  CHECK(max_abs_diff(laplacian(h, phi), flat) < 1e-12);
}

TEST_CASE("Stokes identity on the shear chart converges at second order") {
  const double e64 = shear_stokes_error(64), e128 = shear_stokes_error(128);
  CHECK(e64 / e128 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("cubic norm and area") {
  const TorusGrid g = make_grid(16);
  ComplexMetric h{Field(g, 0.0), BeltramiChart::constant(g, 0.0)};
  Field c = cubic_norm(h, CubicPair{Field(g, 1.0), Field(g, 1.0)});
  CHECK(std::abs(c.mean() - 0.125) < 1e-15);
  CHECK(std::abs(area_integrate(h, Field(g, 1.0)) - 2.0) < 1e-13);
  // Scaling the metric by e^{2 psi} scales ||C||^2 by e^{-6 psi}.
  ComplexMetric h2{Field(g, 0.2), BeltramiChart::constant(g, 0.0)};
  Field c2 = cubic_norm(h2, CubicPair{Field(g, 1.0), Field(g, 1.0)});
  CHECK(std::abs(c2.mean() - 0.125 * std::exp(-1.2)) < 1e-15);
}

TEST_CASE("symbol check") {
  CHECK(symbol_check(0.0));
  CHECK(symbol_check(0.5));
  CHECK(symbol_check(cd(0.0, 2.0)));
  CHECK(!symbol_check(1.0));
  CHECK(!symbol_check(cd(0.0, 1.0)));
  CHECK(symbol_min(0.5) == doctest::Approx(0.5));
}

TEST_CASE("curvature of a real metric is real when mu = 0") {
  const TorusGrid g = make_grid(32);
  ComplexMetric h{oracle::trig_field(g, 0.3), BeltramiChart::constant(g, 0.0)};
  Field K = curvature(h);
  CHECK(K.max_imag() < 1e-12);
  CHECK(K.max_abs() > 1.0);
  // Gauss-Bonnet on the torus: the integral of K dA vanishes.
  CHECK(std::abs(area_integrate(h, K)) < 1e-10);
}

TEST_CASE("holomorphy residual") {
  const TorusGrid g = make_grid(32);
  BeltramiChart c = BeltramiChart::constant(g, 0.3);
  CHECK(holomorphy_residual(CubicPair{Field(g, 1.0), Field(g, cd(0.5, 0.5))}, c) == 0.0);
  Field wiggle = Field::from_fn(g, [](double x, double) { return cd(std::cos(kTwoPi * x)); });
  CHECK(holomorphy_residual(CubicPair{wiggle, Field(g, 1.0)}, c) > 1.0);
}

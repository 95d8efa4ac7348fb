#include <doctest.h>

#include <random>

#include "bct/stencil.hpp"

using namespace bct;

namespace {

Field random_field(TorusGrid g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Field f(g);
  for (cd& v : f.v) v = cd(nd(rng), nd(rng));
  return f;
}

}  // namespace

TEST_CASE("scalar kernel matches the operator written with grid differences") {
  std::mt19937_64 rng(3);
  const TorusGrid g = make_grid(32);
  OpCoeffs op{random_field(g, rng), random_field(g, rng), random_field(g, rng), random_field(g, rng)};
  Field phi = random_field(g, rng);
  Field ref = op.a * d_zzb(phi) + op.b * d_zbzb(phi) + op.c * d_zb(phi) + op.d * phi;
  Field got = apply_operator(op, phi, Kernel::Scalar);
  CHECK(max_abs_diff(got, ref) <= 1e-12 * ref.max_abs());
}

TEST_CASE("AVX2 kernel is equivalent to the scalar reference") {
  if (!avx2_available()) {
    MESSAGE("AVX2 not available on this CPU; only the scalar path is exercised");
    return;
  }
  std::mt19937_64 rng(5);
  for (int n : {16, 32, 64, 128}) {
    const TorusGrid g = make_grid(n);
    OpCoeffs op{random_field(g, rng), random_field(g, rng), random_field(g, rng), random_field(g, rng)};
    Field phi = random_field(g, rng);
    Field s = apply_operator(op, phi, Kernel::Scalar);
    Field v = apply_operator(op, phi, Kernel::Avx2);
    CHECK(max_abs_diff(s, v) <= 1e-13 * s.max_abs());
  }
}

TEST_CASE("results do not depend on the worker count") {
  std::mt19937_64 rng(9);
  const TorusGrid g = make_grid(64);
  OpCoeffs op{random_field(g, rng), random_field(g, rng), random_field(g, rng), random_field(g, rng)};
  Field phi = random_field(g, rng);
  const int saved = threads();
  set_threads(1);
  Field one = apply_operator(op, phi);
  set_threads(4);
  Field four = apply_operator(op, phi);
  set_threads(saved);
  CHECK(max_abs_diff(one, four) == 0.0);
}

TEST_CASE("operator diagonal is the response to a point mass") {
  std::mt19937_64 rng(13);
  const TorusGrid g = make_grid(16);
  OpCoeffs op{random_field(g, rng), random_field(g, rng), random_field(g, rng), random_field(g, rng)};
  Field diag = operator_diagonal(op);
  for (int q : {0, 17, 255}) {
    Field e(g);
    e.v[q] = 1.0;
    Field r = apply_operator(op, e, Kernel::Scalar);
    CHECK(std::abs(r.v[q] - diag.v[q]) <= 1e-12 * std::abs(diag.v[q]));
  }
}

TEST_CASE("grid sizes") {
  CHECK_THROWS(make_grid(15));
  CHECK_THROWS(make_grid(8));
  CHECK_THROWS(make_grid(100));
  CHECK(make_grid(16).n == 16);
  TorusGrid g = make_grid(16);
  CHECK(g.idx(-1, 0) == 15);
  CHECK(g.idx(0, 16) == 0);
}

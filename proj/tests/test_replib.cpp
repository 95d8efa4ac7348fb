#include <doctest.h>

#include <random>

#include "bct/errors.hpp"
#include "bct/io.hpp"
#include "bct/replib.hpp"

using namespace bct;

namespace {

std::mt19937_64 rng(17);
std::normal_distribution<double> nd;

Mat3 random_sl3(double spread) {
  Mat3 M;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = (i == j ? 1.0 : 0.0) + spread * nd(rng);
  return M / std::pow(M.determinant(), 1.0 / 3.0);
}

Mat3 unipotent() {
  Mat3 U = Mat3::Identity();
  U(0, 1) = 1.0;
  U(1, 2) = 0.5;
  return U;
}

MatField random_matfield(TorusGrid g) {
  MatField m(g);
  for (BcMat3& X : m.v)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) X.plus(i, j) = cd(nd(rng), nd(rng));
  return m;
}

}  // namespace

TEST_CASE("irreducible embedding") {
  Mat2 D = Mat2::Zero();
  D(0, 0) = 2.0;
  D(1, 1) = 0.5;
  Mat3 M = irreducible_embed(D);
  Mat3 expect = Mat3::Zero();
  expect.diagonal() << 4.0, 1.0, 0.25;
  CHECK((M - expect).cwiseAbs().maxCoeff() == 0.0);
  Loxodromy L = loxodromy(M);
  CHECK(L.loxodromic);
  CHECK(L.moduli[0] == doctest::Approx(4.0));
  CHECK(L.moduli[1] == doctest::Approx(1.0));
  CHECK(L.moduli[2] == doctest::Approx(0.25));
  CHECK_THROWS_AS(irreducible_embed(2.0 * Mat2::Identity()), Error);

  // Homomorphism and determinant one.
  Mat2 A, B;
  A << 2.0, 1.0, 1.0, 1.0;
  B << 1.0, 0.3, 0.0, 1.0;
  CHECK((irreducible_embed(A * B) - irreducible_embed(A) * irreducible_embed(B)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(std::abs(irreducible_embed(A).determinant() - 1.0) < 1e-13);
}

TEST_CASE("unipotent matrices are not loxodromic") {
  CHECK(!loxodromy(unipotent()).loxodromic);
  CHECK(!loxodromy(Mat3::Identity()).loxodromic);
  CHECK_THROWS_AS(loxodromy(2.0 * Mat3::Identity()), Error);
}

TEST_CASE("transversality of coordinate flags") {
  Flag std_flag{Vec3(1.0, 0.0, 0.0), Row3(0.0, 0.0, 1.0)};
  Flag opposite{Vec3(0.0, 0.0, 1.0), Row3(1.0, 0.0, 0.0)};
  CHECK(transversality(std_flag, opposite) == doctest::Approx(1.0));
  CHECK(transversality(std_flag, std_flag) == 0.0);
}

TEST_CASE("reduced words") {
  auto inverse_pair = [](char x, char y) { return x != y && std::tolower(x) == std::tolower(y); };
  auto w = reduced_words(2, 3, false);
  CHECK(w.size() == 4 + 12 + 36);
  for (const auto& s : w)
    for (size_t k = 1; k < s.size(); ++k) CHECK(!inverse_pair(s[k], s[k - 1]));
  auto cyc = reduced_words(2, 3, true);
  CHECK(cyc.size() < w.size());
  for (const auto& s : cyc) CHECK(!inverse_pair(s.front(), s.back()));
}

TEST_CASE("centralizer dimension") {
  Representation one;
  one.names = {"a"};
  Mat3 D = Mat3::Zero();
  D.diagonal() << 2.0, 1.0, 0.5;
  one.gens = {D};
  CHECK(centralizer_check(one) == 3);
  one.gens = {Mat3::Identity()};
  CHECK(centralizer_check(one) == 9);
  CHECK(centralizer_check(build_representation(ExperimentConfig{})) == 1);
}

TEST_CASE("Fuchsian representation is Anosov and stays so under small perturbation") {
  Representation rho = build_representation(ExperimentConfig{});
  AnosovReport a = anosov_scan(rho, 4);
  CHECK(a.passed);
  CHECK(a.all_loxodromic);
  CHECK(a.min_transversality > 1e-3);

  Representation conj = rho;
  Mat3 g = random_sl3(0.3), gi = g.inverse();
  for (Mat3& m : conj.gens) m = g * m * gi;
  AnosovReport b = anosov_scan(conj, 4);
  CHECK(b.passed);
  CHECK(b.words_checked == a.words_checked);
  CHECK(b.min_gap_ratio == doctest::Approx(a.min_gap_ratio).epsilon(1e-8));
  CHECK(b.min_transversality > 1e-3);

  Representation pert = rho;
  for (Mat3& m : pert.gens) {
    Mat3 e;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) e(i, j) = 1e-3 * nd(rng);
    m += e;
    m /= std::pow(m.determinant(), 1.0 / 3.0);
  }
  CHECK(anosov_scan(pert, 4).passed);
}

TEST_CASE("reducible examples are caught") {
  Representation tri;
  tri.names = {"a", "b"};
  Mat3 A = Mat3::Zero(), B = Mat3::Zero();
  A.diagonal() << 2.0, 1.0, 0.5;
  A(0, 1) = 1.0;
  B.diagonal() << 3.0, 0.5, 1.0 / 1.5;
  B(1, 2) = 0.7;
  tri.gens = {A, B};
  AnosovReport r = anosov_scan(tri, 4);
  CHECK(!r.passed);
  CHECK(!r.all_loxodromic);
  CHECK(r.first_failure.size() == 4);
}

TEST_CASE("representations are validated") {
  Representation bad;
  bad.names = {"a"};
  bad.gens = {2.0 * Mat3::Identity()};
  CHECK_THROWS_AS(bad.validate(), Error);
  Representation named;
  named.names = {"A"};
  named.gens = {Mat3::Identity()};
  CHECK_THROWS_AS(named.validate(), Error);
  Representation rel = build_representation(ExperimentConfig{});
  rel.relations = {"ab"};
  CHECK_THROWS_AS(rel.validate(), Error);
}

TEST_CASE("Goldman pairing is antisymmetric and bilinear") {
  const TorusGrid g = make_grid(16);
  Variation a{random_matfield(g), random_matfield(g)}, b{random_matfield(g), random_matfield(g)};
  const cd ab = goldman_pairing(a, b), ba = goldman_pairing(b, a);
  CHECK(std::abs(ab + ba) < 1e-12 * std::abs(ab));
  CHECK(std::abs(goldman_pairing(a, a)) < 1e-12);
  Variation a2{a.dx + a.dx, a.dy + a.dy};
  CHECK(std::abs(goldman_pairing(a2, b) - 2.0 * ab) < 1e-12 * std::abs(ab));
}

#include <doctest.h>

#include "bct/errors.hpp"
#include "bct/io.hpp"

using namespace bct;

namespace {

Errc code_of(const json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::StageFailure;
}

}  // namespace

TEST_CASE("unknown keys and bad values are configuration errors") {
  CHECK(code_of(json{{"grid", 64}, {"gird", 64}}) == Errc::ConfigError);
  CHECK(code_of(json{{"chart", {{"kind", "constant"}, {"colour", 1}}}}) == Errc::ConfigError);
  CHECK(code_of(json{{"grid", 100}}) == Errc::ConfigError);
  CHECK(code_of(json{{"chart", {{"kind", "spiral"}}}}) == Errc::ConfigError);
  CHECK(code_of(json{{"background", {{"Kg", 1}}}}) == Errc::ConfigError);
  CHECK(code_of(json{{"grid", "64"}}) == Errc::ConfigError);
}

TEST_CASE("mu on the unit circle is rejected") {
  CHECK(code_of(json{{"chart", {{"kind", "constant"}, {"mu", 1.0}}}}) == Errc::ConfigError);
  ExperimentConfig c;
  c.chart.mu = cd(0.0, 1.0);
  CHECK_THROWS_AS(build_chart(c), Error);
}

TEST_CASE("canonical form round trips and hashes deterministically") {
  json j = {{"grid", 32},
            {"chart", {{"kind", "constant"}, {"mu", {0.3, 0.1}}}},
            {"background", {{"Kg", "0"}}},
            {"cubic", {{"alpha", {1.0, 0.5}}, {"perturbation", 0.1}}}};
  ExperimentConfig c = parse_config(j);
  CHECK(c.grid == 32);
  CHECK(c.chart.mu == cd(0.3, 0.1));
  CHECK(c.cubic.alpha == cd(1.0, 0.5));
  json canon = to_json(c);
  CHECK(to_json(parse_config(canon)) == canon);
  CHECK(config_hash(c) == config_hash(parse_config(canon)));
  CHECK(config_hash(c).size() == 16);
  ExperimentConfig d = c;
  d.grid = 64;
  CHECK(config_hash(d) != config_hash(c));
}

TEST_CASE("Hitchin locus detection") {
  ExperimentConfig c;
  c.cubic.alpha = 1.0;
  CHECK(is_hitchin_locus(c));
  c.cubic.beta = cd(0.5, 0.0);
  CHECK(!is_hitchin_locus(c));
  c.cubic.beta.reset();
  c.chart.mu = 0.2;
  CHECK(!is_hitchin_locus(c));
}

TEST_CASE("bi-complex and matrix json round trips") {
  Bicomplex w(cd(1.5, -2.0), cd(0.25, 3.0));
  Bicomplex back = bicomplex_from_json(bicomplex_json(w));
  CHECK(back.plus() == w.plus());
  CHECK(back.minus() == w.minus());
  Mat3 M;
  M << 1.0, cd(0, 2), 3.0, 4.0, 5.0, cd(6, -1), 7.0, 8.0, 9.5;
  CHECK((mat3_from_json(mat3_json(M)) - M).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("field CSV round trip is exact") {
  const TorusGrid g = make_grid(16);
  Field f = Field::from_fn(g, [](double x, double y) { return cd(std::sin(7.0 * x) / 3.0, std::exp(y) * 1e-7); });
  const std::string path = "bct_test_field.csv";
  write_field_csv(path, f);
  Field r = read_field_csv(path, g);
  CHECK(max_abs_diff(f, r) == 0.0);
  std::remove(path.c_str());
}

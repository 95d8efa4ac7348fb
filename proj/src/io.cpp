#include "bct/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "bct/errors.hpp"

namespace bct {

namespace {

constexpr double kTwoPi = 6.283185307179586;

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::ConfigError, what); }

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad(where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) bad("unknown key '" + it.key() + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    bad(where + "." + key + " has the wrong type");
  }
}

cd read_complex(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  bad(where + " must be a number or [re, im]");
}

json complex_json(cd z) { return json::array({z.real(), z.imag()}); }

std::vector<std::vector<double>> read_csv(const std::string& path, size_t cols) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
    std::vector<double> r;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) r.push_back(std::stod(cell));
    if (r.size() != cols) bad(path + ": expected " + std::to_string(cols) + " columns");
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  only_keys(j, "config", {"grid", "seed", "threads", "out", "chart", "background", "cubic", "solver", "tolerances", "rep"});
  ExperimentConfig c;
  read(j, "grid", c.grid, "config");
  read(j, "seed", c.seed, "config");
  read(j, "threads", c.threads, "config");
  read(j, "out", c.out, "config");
  make_grid(c.grid);
  if (c.threads < 1) bad("threads must be >= 1");

  if (j.contains("chart")) {
    const json& s = j["chart"];
    only_keys(s, "chart", {"kind", "mu", "eps", "file"});
    read(s, "kind", c.chart.kind, "chart");
    if (s.contains("mu")) c.chart.mu = read_complex(s["mu"], "chart.mu");
    read(s, "eps", c.chart.eps, "chart");
    read(s, "file", c.chart.file, "chart");
    if (c.chart.kind != "constant" && c.chart.kind != "shear" && c.chart.kind != "file")
      bad("chart.kind must be constant, shear or file");
    if (c.chart.kind == "file" && c.chart.file.empty()) bad("chart.file is required for kind 'file'");
    if (std::abs(c.chart.mu) >= 1.0) bad("chart.mu must satisfy |mu| < 1");
  }
  if (j.contains("background")) {
    const json& s = j["background"];
    only_keys(s, "background", {"Kg", "psi_amplitude"});
    if (s.contains("Kg")) {
      const json& k = s["Kg"];
      if (k.is_number()) {
        double v = k.get<double>();
        if (v != -1.0 && v != 0.0) bad("background.Kg must be -1, 0 or \"curvature\"");
        c.background.Kg = v == 0.0 ? "0" : "-1";
      } else if (k.is_string()) {
        c.background.Kg = k.get<std::string>();
        if (c.background.Kg != "-1" && c.background.Kg != "0" && c.background.Kg != "curvature")
          bad("background.Kg must be -1, 0 or \"curvature\"");
      } else {
        bad("background.Kg has the wrong type");
      }
    }
    read(s, "psi_amplitude", c.background.psi_amplitude, "background");
  }
  if (j.contains("cubic")) {
    const json& s = j["cubic"];
    only_keys(s, "cubic", {"alpha", "beta", "perturbation", "project", "alpha_file", "beta_file"});
    if (s.contains("alpha")) c.cubic.alpha = read_complex(s["alpha"], "cubic.alpha");
    if (s.contains("beta")) c.cubic.beta = read_complex(s["beta"], "cubic.beta");
    read(s, "perturbation", c.cubic.perturbation, "cubic");
    read(s, "project", c.cubic.project, "cubic");
    read(s, "alpha_file", c.cubic.alpha_file, "cubic");
    read(s, "beta_file", c.cubic.beta_file, "cubic");
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    only_keys(s, "solver", {"tol", "max_iter", "max_halvings", "linear_max_iter"});
    read(s, "tol", c.solver.tol, "solver");
    read(s, "max_iter", c.solver.max_iter, "solver");
    read(s, "max_halvings", c.solver.max_halvings, "solver");
    read(s, "linear_max_iter", c.solver.linear_max_iter, "solver");
    if (!(c.solver.tol > 0.0) || c.solver.max_iter < 1 || c.solver.max_halvings < 0 || c.solver.linear_max_iter < 1)
      bad("solver limits out of range");
  }
  if (j.contains("tolerances")) {
    const json& s = j["tolerances"];
    only_keys(s, "tolerances", {"path", "flatness_factor", "affine_factor"});
    read(s, "path", c.tolerances.path, "tolerances");
    read(s, "flatness_factor", c.tolerances.flatness_factor, "tolerances");
    read(s, "affine_factor", c.tolerances.affine_factor, "tolerances");
  }
  if (j.contains("rep")) {
    const json& s = j["rep"];
    only_keys(s, "rep", {"names", "generators", "relations", "fuchsian_ell", "fuchsian_angle", "max_len", "gap_tol",
                         "transversality_tol", "goldman_step"});
    read(s, "names", c.rep.names, "rep");
    read(s, "relations", c.rep.relations, "rep");
    if (s.contains("generators")) {
      if (!s["generators"].is_array()) bad("rep.generators must be a list of 3x3 matrices");
      for (const json& m : s["generators"]) c.rep.generators.push_back(mat3_from_json(m));
    }
    read(s, "fuchsian_ell", c.rep.fuchsian_ell, "rep");
    read(s, "fuchsian_angle", c.rep.fuchsian_angle, "rep");
    read(s, "max_len", c.rep.max_len, "rep");
    read(s, "gap_tol", c.rep.gap_tol, "rep");
    read(s, "transversality_tol", c.rep.transversality_tol, "rep");
    read(s, "goldman_step", c.rep.goldman_step, "rep");
    if (c.rep.max_len < 1 || c.rep.max_len > 8) bad("rep.max_len must be in 1..8");
    if (!c.rep.generators.empty() && c.rep.names.empty())
      for (size_t k = 0; k < c.rep.generators.size(); ++k) c.rep.names.push_back(std::string(1, char('a' + k)));
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    bad(path + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["grid"] = c.grid;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["out"] = c.out;
  j["chart"] = {{"kind", c.chart.kind}, {"mu", complex_json(c.chart.mu)}, {"eps", c.chart.eps}, {"file", c.chart.file}};
  j["background"] = {{"Kg", c.background.Kg}, {"psi_amplitude", c.background.psi_amplitude}};
  j["cubic"] = {{"alpha", complex_json(c.cubic.alpha)},
                {"perturbation", c.cubic.perturbation},
                {"project", c.cubic.project},
                {"alpha_file", c.cubic.alpha_file},
                {"beta_file", c.cubic.beta_file}};
  if (c.cubic.beta) j["cubic"]["beta"] = complex_json(*c.cubic.beta);
  j["solver"] = {{"tol", c.solver.tol},
                 {"max_iter", c.solver.max_iter},
                 {"max_halvings", c.solver.max_halvings},
                 {"linear_max_iter", c.solver.linear_max_iter}};
  j["tolerances"] = {{"path", c.tolerances.path},
                     {"flatness_factor", c.tolerances.flatness_factor},
                     {"affine_factor", c.tolerances.affine_factor}};
  json gens = json::array();
  for (const Mat3& m : c.rep.generators) gens.push_back(mat3_json(m));
  j["rep"] = {{"names", c.rep.names},
              {"generators", gens},
              {"relations", c.rep.relations},
              {"fuchsian_ell", c.rep.fuchsian_ell},
              {"fuchsian_angle", c.rep.fuchsian_angle},
              {"max_len", c.rep.max_len},
              {"gap_tol", c.rep.gap_tol},
              {"transversality_tol", c.rep.transversality_tol},
              {"goldman_step", c.rep.goldman_step}};
  return j;
}

std::string config_hash(const ExperimentConfig& c) {
  const std::string s = to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

BeltramiChart build_chart(const ExperimentConfig& c) {
  const TorusGrid g = make_grid(c.grid);
  if (c.chart.kind == "constant") return BeltramiChart::constant(g, c.chart.mu);
  if (c.chart.kind == "shear") {
    const double e = c.chart.eps;
    return BeltramiChart::from_map(
        g, [e](double, double y) { return cd(1.0, -0.5 * e * std::cos(kTwoPi * y)); },
        [e](double, double y) { return cd(0.0, 0.5 * e * std::cos(kTwoPi * y)); });
  }
  auto rows = read_csv(c.chart.file, 8);
  if (rows.size() != size_t(g.size())) bad(c.chart.file + ": expected one row per grid node");
  Field mu(g), dwz(g), dzbwb(g);
  for (const auto& r : rows) {
    int i = static_cast<int>(r[0]), j = static_cast<int>(r[1]);
    mu(i, j) = {r[2], r[3]};
    dwz(i, j) = {r[4], r[5]};
    dzbwb(i, j) = {r[6], r[7]};
  }
  return BeltramiChart::from_fields(mu, dwz, dzbwb);
}

Field background_psi(const ExperimentConfig& c) {
  const double A = c.background.psi_amplitude;
  return Field::from_fn(make_grid(c.grid),
                        [A](double x, double y) { return cd(A * std::sin(kTwoPi * x) * std::cos(kTwoPi * y)); });
}

CubicPair build_cubic(const ExperimentConfig& c) {
  const TorusGrid g = make_grid(c.grid);
  const double A = c.cubic.perturbation;
  auto make = [&](cd base, const std::string& file) {
    if (!file.empty()) return read_field_csv(file, g);
    return Field::from_fn(g, [&](double x, double) { return base + A * std::exp(cd(0.0, kTwoPi * x)); });
  };
  CubicPair C{make(c.cubic.alpha, c.cubic.alpha_file), make(c.cubic.beta.value_or(c.cubic.alpha), c.cubic.beta_file)};
  if (c.cubic.project) {
    C.alpha = project_holomorphic(C.alpha);
    C.beta = project_holomorphic(C.beta);
  }
  return C;
}

GaussProblem build_problem(const ExperimentConfig& c) {
  const TorusGrid g = make_grid(c.grid);
  ComplexMetric bg{background_psi(c), build_chart(c)};
  Field Kg = c.background.Kg == "curvature" ? curvature(bg) : Field(g, c.background.Kg == "-1" ? -1.0 : 0.0);
  return make_problem(std::move(bg), std::move(Kg), build_cubic(c));
}

SolveOptions solve_options(const ExperimentConfig& c) {
  SolveOptions o;
  o.tol = c.solver.tol;
  o.max_iter = c.solver.max_iter;
  o.max_halvings = c.solver.max_halvings;
  o.linear_max_iter = c.solver.linear_max_iter;
  return o;
}

bool is_hitchin_locus(const ExperimentConfig& c) {
  const cd beta = c.cubic.beta.value_or(c.cubic.alpha);
  return c.chart.kind == "constant" && c.chart.mu == 0.0 && beta == c.cubic.alpha && c.cubic.perturbation == 0.0 &&
         c.cubic.alpha_file.empty() && c.cubic.beta_file.empty();
}

Representation build_representation(const ExperimentConfig& c) {
  Representation rep;
  if (!c.rep.generators.empty()) {
    rep.names = c.rep.names;
    rep.gens = c.rep.generators;
    rep.relations = c.rep.relations;
    return rep;
  }
  // Two hyperbolic elements with axes rotated by the given angle.
  const double l = c.rep.fuchsian_ell, t = c.rep.fuchsian_angle;
  Mat2 A, R;
  A << std::cosh(l), std::sinh(l), std::sinh(l), std::cosh(l);
  R << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  Mat2 B = R * A * R.inverse();
  rep.names = {"a", "b"};
  rep.gens = {irreducible_embed(A), irreducible_embed(B)};
  return rep;
}

json bicomplex_json(const Bicomplex& w) { return {{"z1", complex_json(w.z1())}, {"z2", complex_json(w.z2())}}; }

Bicomplex bicomplex_from_json(const json& j) {
  only_keys(j, "bicomplex", {"z1", "z2"});
  if (!j.contains("z1") || !j.contains("z2")) bad("bicomplex needs z1 and z2");
  return Bicomplex(read_complex(j["z1"], "z1"), read_complex(j["z2"], "z2"));
}

json bcmat3_json(const BcMat3& X) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) {
    json row = json::array();
    for (int c = 0; c < 3; ++c) row.push_back(bicomplex_json(X(r, c)));
    rows.push_back(row);
  }
  return rows;
}

json mat3_json(const Mat3& M) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) {
    json row = json::array();
    for (int c = 0; c < 3; ++c) row.push_back(complex_json(M(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Mat3 mat3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) bad("matrix must have 3 rows");
  Mat3 M;
  for (int r = 0; r < 3; ++r) {
    if (!j[r].is_array() || j[r].size() != 3) bad("matrix row must have 3 entries");
    for (int c = 0; c < 3; ++c) M(r, c) = read_complex(j[r][c], "matrix entry");
  }
  return M;
}

void write_field_csv(const std::string& path, const Field& f) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::ConfigError, "cannot write " + path);
  out << "i,j,x,y,re,im\n";
  char buf[160];
  for (int j = 0; j < f.n(); ++j)
    for (int i = 0; i < f.n(); ++i) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%.17g\n", i, j, f.grid.x(i), f.grid.y(j),
                    f(i, j).real(), f(i, j).imag());
      out << buf;
    }
}

Field read_field_csv(const std::string& path, TorusGrid g) {
  auto rows = read_csv(path, 6);
  if (rows.size() != size_t(g.size())) bad(path + ": expected one row per grid node");
  Field f(g);
  for (const auto& r : rows) f(static_cast<int>(r[0]), static_cast<int>(r[1])) = {r[4], r[5]};
  return f;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::ConfigError, "cannot write " + path);
  out << text;
}

json RunManifest::to_json() const {
  return {{"command", command},
          {"config_hash", config_hash},
          {"config", config},
          {"versions", {{"bct", "0.1.0"}, {"format", 1}}},
          {"stages", stages},
          {"criteria", criteria},
          {"passed", passed}};
}

}  // namespace bct

// bct: command-line front end. Every command writes a run manifest; exit
// code 0 when all selected criteria pass, 1 on a criterion failure, 2 on a
// configuration error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "bct/affine.hpp"
#include "bct/chtau.hpp"
#include "bct/connection.hpp"
#include "bct/errors.hpp"
#include "bct/gauss.hpp"
#include "bct/io.hpp"
#include "bct/replib.hpp"
#include "criteria.hpp"

namespace fs = std::filesystem;
using namespace bct;

namespace {

struct Flags {
  std::string config;
  int grid = 0;
  long long seed = -1;
  int threads = 0;
  std::string out;
  bool json_out = false;
  std::string gens;
  int len = 0;
};

// A stage that could not produce its result; carries the criterion it blocks.
struct StageFailure {
  int criterion;
  std::string what;
};

struct Run {
  Flags flags;
  ExperimentConfig cfg;
  bool have_config = false;
  RunManifest manifest;

  void record(const criteria::Result& r) {
    manifest.criteria[std::to_string(r.id)] = criteria::to_json(r);
    manifest.passed = manifest.passed && r.pass;
    if (!flags.json_out) std::printf("%s\n", criteria::line(r).c_str());
  }

  void check(int id, const std::string& title, bool pass, json metrics) {
    manifest.criteria[std::to_string(id)] = {{"id", id}, {"title", title}, {"pass", pass}, {"metrics", metrics}};
    manifest.passed = manifest.passed && pass;
    if (!flags.json_out) std::printf("criterion %2d %s  %s\n", id, pass ? "PASS" : "FAIL", title.c_str());
  }

  void stage(const std::string& name, json summary) {
    if (!flags.json_out) std::printf("stage %-10s %s\n", name.c_str(), summary.dump().c_str());
    manifest.stages[name] = std::move(summary);
  }

  std::string out_path(const std::string& file) const { return (fs::path(cfg.out) / file).string(); }
};

ExperimentConfig resolve_config(const Flags& f, const ExperimentConfig& fallback, bool* have) {
  ExperimentConfig c = fallback;
  *have = !f.config.empty();
  if (*have) c = load_config(f.config);
  if (f.grid > 0) {
    make_grid(f.grid);
    c.grid = f.grid;
  }
  if (f.seed >= 0) c.seed = static_cast<std::uint64_t>(f.seed);
  if (f.threads > 0) c.threads = f.threads;
  if (!f.out.empty()) c.out = f.out;
  return c;
}

criteria::Options crit_options(const Run& run) { return {run.cfg.seed}; }

struct SolvedDatum {
  GaussProblem pb;
  SolveReport sr;
  Field psi;
  FlatConnectionField conn;
};

SolvedDatum solve_stage(Run& run) {
  SolvedDatum d;
  d.pb = build_problem(run.cfg);
  SolveOptions o = solve_options(run.cfg);
  o.throw_on_failure = false;
  d.sr = solve_newton(d.pb, o);
  const double res = residual_background(d.sr.psi, d.pb).max_abs();
  run.stage("solve", {{"iterations", d.sr.iterations},
                      {"residual", res},
                      {"residual_history", d.sr.residual_history},
                      {"converged", d.sr.converged}});
  run.check(4, "Gauss solve converged to the residual tolerance", d.sr.converged && res <= run.cfg.solver.tol,
            {{"residual", res}, {"iterations", d.sr.iterations}});
  if (!d.sr.converged) throw StageFailure{4, "Newton did not converge"};
  d.psi = d.sr.psi + background_psi(run.cfg);
  if (!run.cfg.out.empty()) write_field_csv(run.out_path("psi.csv"), d.psi);
  return d;
}

void assemble_stage(Run& run, SolvedDatum& d) {
  d.conn = assemble(d.psi, d.pb.C, d.pb.background.chart);
  const double h = 1.0 / run.cfg.grid;
  const double mc = maurer_cartan_residual(d.conn).max_abs();
  const double bound = run.cfg.tolerances.flatness_factor * h * h;
  run.stage("flatness", {{"mc_residual", mc}, {"invariant_residual", invariant_residual(d.conn)}, {"bound", bound}});
  run.check(5, "Maurer-Cartan residual within the flatness bound", mc <= bound, {{"mc_residual", mc}});
}

void holonomy_stage(Run& run, const SolvedDatum& d) {
  const int n = run.cfg.grid;
  BcMat3 X = holonomy(d.conn, Loop::x_period(n)), Y = holonomy(d.conn, Loop::y_period(n));
  const double det = std::max(std::abs(X.plus.determinant() - 1.0), std::abs(Y.plus.determinant() - 1.0));
  const double comm = (X * Y - Y * X).max_abs();
  const double compat = std::max(phi_compat_residual(X), phi_compat_residual(Y));
  run.stage("holonomy", {{"det_defect", det},
                         {"commutator", comm},
                         {"compat", compat},
                         {"x_period", bcmat3_json(X)},
                         {"y_period", bcmat3_json(Y)}});
  run.check(6, "period holonomies unimodular, commuting and compatible",
            det <= 1e-9 && comm <= 10.0 / n && compat <= 1e-9,
            {{"det_defect", det}, {"commutator", comm}, {"compat", compat}});
}

void affine_stage(Run& run, const SolvedDatum& d) {
  if (!is_hitchin_locus(run.cfg))
    throw Error(Errc::ConfigError, "affine roundtrip needs Hitchin-locus data (flat mu = 0 chart, alpha = beta)");
  const int n = run.cfg.grid;
  const double h = 1.0 / n, bound = run.cfg.tolerances.affine_factor * h * h;
  FrameReport fr;
  AffinePair pair = normalize_lift(integrate_frame(d.conn, 3, run.cfg.tolerances.path, &fr));
  StructureReport sp = structure_residuals(pair, false), sm = structure_residuals(pair, true);
  double blaschke = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Mat2d e = sp.data.gB[size_t(j) * n + i] - 2.0 * std::exp(2.0 * d.psi(i, j).real()) * Mat2d::Identity();
      blaschke = std::max(blaschke, e.cwiseAbs().maxCoeff());
    }
  json m = {{"pairing", pairing_defect(pair)},
            {"conormal", conormal_defect(pair)},
            {"shape_plus_identity", std::max(sp.S_residual, sm.S_residual)},
            {"xi_minus_f", std::max(sp.xi_residual, sm.xi_residual)},
            {"blaschke_vs_h", blaschke},
            {"pick_sum", pick_dual_residual(sp.data, sm.data)}};
  bool ok = true;
  for (auto it = m.begin(); it != m.end(); ++it) ok = ok && it->get<double>() <= bound;
  m["path_residual"] = fr.path_residual;
  m["bound"] = bound;
  run.stage("affine", m);
  run.check(8, "affine sphere residuals within the affine bound", ok, m);
  if (!run.cfg.out.empty()) {
    std::ofstream out(run.out_path("fplus.csv"));
    out << "i,j,X,Y,Z\n";
    char buf[128];
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Vec3d& f = pair.fplus.at(i, j);
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", i, j, f(0), f(1), f(2));
        out << buf;
      }
  }
}

void chtau_stage(Run& run) {
  std::mt19937_64 rng(run.cfg.seed);
  std::normal_distribution<double> nd;
  auto rv = [&] {
    Vec3 v;
    for (int k = 0; k < 3; ++k) v(k) = cd(nd(rng), nd(rng));
    return v;
  };
  double sec = 0.0, incidence = 0.0;
  for (int k = 0; k < 50; ++k) {
    HyperboloidPoint p = HyperboloidPoint::normalize(BcVec3(rv(), rv()));
    TangentVector X = project_tangent(p, BcVec3(rv(), rv()));
    sec = std::max(sec, std::abs(para_holo_sectional(p, X) + 4.0));
    HyperboloidPoint back = from_incidence(to_incidence(p));
    incidence = std::max(incidence, same_point(back, p) ? 0.0 : 1.0);
  }
  const bool ok = sec <= 1e-9 && incidence == 0.0;
  run.stage("chtau", {{"points", 50}, {"para_holomorphic_curvature_defect", sec}, {"incidence_roundtrip_failures", incidence}});
  run.manifest.passed = run.manifest.passed && ok;
}

void anosov_gens(Run& run) {
  std::ifstream in(run.flags.gens);
  if (!in) throw Error(Errc::ConfigError, "cannot open " + run.flags.gens);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigError, run.flags.gens + ": " + e.what());
  }
  if (!j.is_array() || j.empty()) throw Error(Errc::ConfigError, "generator file must be a list of 3x3 matrices");
  Representation rep;
  for (size_t k = 0; k < j.size(); ++k) {
    rep.gens.push_back(mat3_from_json(j[k]));
    rep.names.push_back(std::string(1, char('a' + k)));
  }
  rep.validate();
  const int len = run.flags.len > 0 ? run.flags.len : run.cfg.rep.max_len;
  AnosovOptions o{run.cfg.rep.gap_tol, run.cfg.rep.transversality_tol};
  AnosovReport r = anosov_scan(rep, len, o);
  const int cz = centralizer_check(rep);
  json m = {{"max_len", len},
            {"words", r.words_checked},
            {"all_loxodromic", r.all_loxodromic},
            {"first_failure", r.first_failure},
            {"min_gap_ratio", r.min_gap_ratio},
            {"min_transversality", r.min_transversality},
            {"worst_pair", r.worst_pair},
            {"centralizer_dim", cz},
            {"claim", r.passed ? "no obstruction found up to length " + std::to_string(len) : "obstruction found"}};
  run.stage("anosov", m);
  run.check(10, "anosov scan", r.passed, m);
  if (!r.all_loxodromic) throw StageFailure{10, "loxodromy: word " + r.first_failure + " is not loxodromic"};
  if (!r.passed)
    throw StageFailure{10, "transversality: min " + std::to_string(r.min_transversality) + " at pair " + r.worst_pair};
}

int finish(Run& run) {
  run.manifest.config = to_json(run.cfg);
  run.manifest.config_hash = config_hash(run.cfg);
  const std::string text = run.manifest.to_json().dump(2) + "\n";
  if (!run.cfg.out.empty()) write_text(run.out_path("manifest.json"), text);
  if (run.flags.json_out) std::fputs(text.c_str(), stdout);
  return run.manifest.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bi-complex minimal Lagrangians: metric calculus, Gauss solve, flat connections, affine spheres"};
  app.require_subcommand(1);
  Flags f;
  auto add_flags = [&f](CLI::App* a) {
    a->add_option("--config", f.config, "JSON experiment config");
    a->add_option("--grid", f.grid, "grid size (power of two >= 16)");
    a->add_option("--seed", f.seed, "RNG seed");
    a->add_option("--threads", f.threads, "worker cap");
    a->add_option("--out", f.out, "output directory for manifest.json and CSV fields");
    a->add_flag("--json", f.json_out, "print the manifest to stdout");
  };

  std::string cmd;
  auto sub = [&](CLI::App* parent, const std::string& name, const std::string& desc) {
    CLI::App* s = parent->add_subcommand(name, desc);
    add_flags(s);
    return s;
  };
  auto* algebra = sub(&app, "algebra", "isomorphism checks on random GL(3,C) pairs (criterion 1)");
  auto* chtau = app.add_subcommand("chtau", "the bi-complex hyperbolic plane")->require_subcommand(1);
  auto* ch_check = sub(chtau, "check", "para-holomorphic curvature and incidence round trip on random points");
  auto* metric = app.add_subcommand("metric", "metric calculus")->require_subcommand(1);
  auto* m_conv = sub(metric, "convergence", "Laplacian and curvature convergence (criterion 2)");
  auto* m_stokes = sub(metric, "stokes", "discrete Stokes identity (criterion 3)");
  auto* gauss = sub(&app, "gauss", "Gauss solve; without --config runs criterion 4");
  auto* conn = app.add_subcommand("conn", "flat connection")->require_subcommand(1);
  auto* c_flat = sub(conn, "flatness", "Maurer-Cartan residual (criterion 5)");
  auto* c_hol = sub(conn, "holonomy", "period holonomies (criterion 6)");
  auto* affine = app.add_subcommand("affine", "affine spheres")->require_subcommand(1);
  auto* a_round = sub(affine, "roundtrip", "Wang-data affine roundtrip (criterion 8)");
  auto* a_sv = sub(affine, "second-variation", "second variation trace (criterion 9)");
  auto* rep = app.add_subcommand("rep", "representation diagnostics")->require_subcommand(1);
  auto* r_anosov = sub(rep, "anosov", "Anosov scan (criterion 10)");
  r_anosov->add_option("--gens", f.gens, "JSON list of 3x3 complex generator matrices");
  r_anosov->add_option("--len", f.len, "maximal word length");
  auto* r_gold = sub(rep, "goldman", "Goldman pairing (criterion 7)");
  auto* pipeline = sub(&app, "pipeline", "solve, assemble, flatness, holonomy and (Hitchin locus) affine roundtrip");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Run run;
  run.flags = f;
  try {
    const bool runs_datum = (gauss->parsed() || c_flat->parsed() || c_hol->parsed() || a_round->parsed()) && !f.config.empty();
    run.cfg = resolve_config(f, pipeline->parsed() ? criteria::wang_config(64) : ExperimentConfig{}, &run.have_config);
    set_threads(run.cfg.threads);
    if (!run.cfg.out.empty()) fs::create_directories(run.cfg.out);
    criteria::Options co = crit_options(run);

    for (CLI::App* s : {algebra, chtau, gauss, pipeline, metric, conn, affine, rep})
      if (s->parsed()) cmd = s->get_name();
    for (CLI::App* s : {ch_check, m_conv, m_stokes, c_flat, c_hol, a_round, a_sv, r_anosov, r_gold})
      if (s->parsed()) cmd += " " + s->get_name();
    run.manifest.command = cmd;

    if (algebra->parsed()) run.record(criteria::algebra(co));
    else if (ch_check->parsed()) chtau_stage(run);
    else if (m_conv->parsed()) run.record(criteria::laplacian_convergence(co));
    else if (m_stokes->parsed()) run.record(criteria::stokes(co));
    else if (runs_datum || pipeline->parsed()) {
      SolvedDatum d = solve_stage(run);
      if (!gauss->parsed()) {
        assemble_stage(run, d);
        if (c_hol->parsed() || pipeline->parsed()) holonomy_stage(run, d);
        if (a_round->parsed() || (pipeline->parsed() && is_hitchin_locus(run.cfg))) affine_stage(run, d);
      }
    } else if (gauss->parsed()) run.record(criteria::gauss_exactness(co));
    else if (c_flat->parsed()) run.record(criteria::flatness(co));
    else if (c_hol->parsed()) run.record(criteria::holonomy(co));
    else if (a_round->parsed()) run.record(criteria::affine_roundtrip(co));
    else if (a_sv->parsed()) run.record(criteria::second_variation(co));
    else if (r_gold->parsed()) run.record(criteria::goldman(co));
    else if (r_anosov->parsed()) {
      if (f.gens.empty()) run.record(criteria::representation(co));
      else anosov_gens(run);
    }
  } catch (const StageFailure& e) {
    std::fprintf(stderr, "StageFailure: criterion %d (%s)\n", e.criterion, e.what.c_str());
    run.manifest.passed = false;
    run.manifest.stages["failure"] = {{"criterion", e.criterion}, {"what", e.what}};
    finish(run);
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    if (e.code() == Errc::ConfigError) return 2;
    run.manifest.passed = false;
    run.manifest.stages["failure"] = {{"error", e.what()}};
    finish(run);
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "ConfigError: %s\n", e.what());
    return 2;
  }
  return finish(run);
}

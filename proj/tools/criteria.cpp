#include "criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "bct/affine.hpp"
#include "bct/connection.hpp"
#include "bct/errors.hpp"
#include "bct/gauss.hpp"
#include "bct/replib.hpp"
#include "oracles.hpp"

namespace bct::criteria {

namespace {

using Clock = std::chrono::steady_clock;

struct Timer {
  Clock::time_point t0 = Clock::now();
  double seconds() const { return std::chrono::duration<double>(Clock::now() - t0).count(); }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Solved {
  ExperimentConfig cfg;
  GaussProblem pb;
  SolveReport sr;
  Field psi;  // solved correction plus the background conformal factor
  FlatConnectionField conn;
};

Solved solve_and_assemble(const ExperimentConfig& cfg) {
  Solved s;
  s.cfg = cfg;
  s.pb = build_problem(cfg);
  s.sr = solve_newton(s.pb, solve_options(cfg));
  s.psi = s.sr.psi + background_psi(cfg);
  s.conn = assemble(s.psi, s.pb.C, s.pb.background.chart);
  return s;
}

double max_abs_entry(const Mat2d& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

ExperimentConfig solved_datum_config(int n) {
  ExperimentConfig c;
  c.grid = n;
  c.chart.kind = "shear";
  c.chart.eps = 0.3;
  c.background.Kg = "curvature";
  c.background.psi_amplitude = 0.1;
  c.cubic.alpha = 1.0;
  return c;
}

ExperimentConfig wang_config(int n) {
  ExperimentConfig c;
  c.grid = n;
  c.background.Kg = "0";
  c.cubic.alpha = 1.0;
  return c;
}

Representation reducible_example() {
  // diag(e^{-c/2} A, e^c) preserves the plane e3 = 0 and the line e3.
  auto block = [](const Mat2& A, double c) {
    Mat3 M = Mat3::Zero();
    M.block(0, 0, 2, 2) = std::exp(-0.5 * c) * A;
    M(2, 2) = std::exp(c);
    return M;
  };
  Representation fuchsian = build_representation(ExperimentConfig{});
  const double l = 1.0, t = std::numbers::pi / 4;
  Mat2 A, R;
  A << std::cosh(l), std::sinh(l), std::sinh(l), std::cosh(l);
  R << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  Representation rep;
  rep.names = fuchsian.names;
  rep.gens = {block(A, 0.9), block(R * A * R.inverse(), -0.7)};
  return rep;
}

Result algebra(const Options& opt) {
  Timer tm;
  Result r{1, "bi-complex isomorphism on random GL(3,C) pairs"};
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd;
  auto random_gl3 = [&] {
    for (;;) {
      Mat3 A;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) A(i, j) = cd(nd(rng), nd(rng));
      if (std::abs(A.determinant()) > 1e-3) return A;
    }
  };
  double hom = 0.0, qpres = 0.0;
  for (int k = 0; k < 100; ++k) {
    Mat3 A = random_gl3(), B = random_gl3();
    BcMat3 pa = phi_iso(A), pb = phi_iso(B), pab = phi_iso(A * B);
    // Residuals relative to the size of the matrices involved.
    hom = std::max(hom, (pab - pa * pb).max_abs() / std::max(1.0, pa.max_abs() * pb.max_abs()));
    for (const BcMat3* X : {&pa, &pb})
      qpres = std::max(qpres, q_preservation_residual(*X) / std::max(1.0, X->max_abs() * X->max_abs()));
  }
  const double sec = tm.seconds();
  r.metrics = {{"pairs", 100}, {"homomorphism_residual", hom}, {"q_preservation_residual", qpres}};
  r.pass = hom <= 1e-12 && qpres <= 1e-12 && sec < 1.0;
  r.summary = "hom " + fmt("%.2e", hom) + ", q " + fmt("%.2e", qpres) + " (<= 1e-12)";
  r.seconds = sec;
  r.metrics["runtime_ok"] = sec < 1.0;
  return r;
}

Result laplacian_convergence(const Options&) {
  Timer tm;
  Result r{2, "h-Laplacian and curvature converge at second order"};
  const cd mus[3] = {0.0, 0.3, std::polar(0.3, std::numbers::pi / 5)};
  bool ok = true;
  json rows = json::array();
  double worst = 0.0;
  for (cd mu : mus) {
    double err[2], kerr[2];
    const int ns[2] = {64, 128};
    for (int k = 0; k < 2; ++k) {
      const TorusGrid g = make_grid(ns[k]);
      ComplexMetric h{oracle::trig_field(g, 0.1), BeltramiChart::constant(g, mu)};
      Field L = laplacian(h, h.psi), K = curvature(h);
      err[k] = kerr[k] = 0.0;
      for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
          const cd ex = oracle::constant_chart_laplacian(mu, 0.1, g.x(i), g.y(j));
          err[k] = std::max(err[k], std::abs(L(i, j) - ex));
          kerr[k] = std::max(kerr[k], std::abs(K(i, j) + ex));
        }
    }
    const double ratio = err[0] / err[1], kratio = kerr[0] / kerr[1];
    const bool row_ok = std::abs(ratio / 4.0 - 1.0) <= 0.15 && std::abs(kratio / 4.0 - 1.0) <= 0.15;
    ok = ok && row_ok;
    worst = std::max({worst, std::abs(ratio / 4.0 - 1.0), std::abs(kratio / 4.0 - 1.0)});
    rows.push_back({{"mu", json::array({mu.real(), mu.imag()})},
                    {"err64", err[0]},
                    {"err128", err[1]},
                    {"ratio", ratio},
                    {"curvature_ratio", kratio}});
  }
  const double sec = tm.seconds();
  r.pass = ok && sec < 10.0;
  r.metrics = {{"charts", rows}, {"runtime_ok", sec < 10.0}};
  r.summary = "error ratio 64->128 within " + fmt("%.1f%%", 100 * worst) + " of 4 (<= 15%)";
  r.seconds = sec;
  return r;
}

Result stokes(const Options&) {
  Timer tm;
  Result r{3, "d(dphi o J) = (Delta_h phi) dA_h on dual cells"};
  const cd mus[3] = {0.0, 0.3, std::polar(0.3, std::numbers::pi / 5)};
  double worst = 0.0;
  json rows = json::array();
  for (int n : {64, 128}) {
    const TorusGrid g = make_grid(n);
    const double h = g.h();
    for (cd mu : mus) {
      BeltramiChart chart = BeltramiChart::constant(g, mu);
      ComplexMetric hm{oracle::trig_field(g, 0.1), chart};
      Field lhs = oracle::dec_stokes(chart, hm.psi);
      Field L = laplacian(hm, hm.psi);
      double e = 0.0;
      for (size_t q = 0; q < L.v.size(); ++q) {
        const cd dA = 2.0 * std::exp(2.0 * hm.psi.v[q]) * chart.dzbwb.v[q];
        e = std::max(e, std::abs(lhs.v[q] - L.v[q] * dA));
      }
      worst = std::max(worst, e / (h * h));
      rows.push_back({{"n", n}, {"mu", json::array({mu.real(), mu.imag()})}, {"err", e}, {"err_over_h2", e / (h * h)}});
    }
  }
  r.pass = worst <= 5.0;
  r.metrics = {{"cases", rows}, {"max_err_over_h2", worst}};
  r.summary = "max error " + fmt("%.2e", worst) + " h^2 (<= 5 h^2)";
  r.seconds = tm.seconds();
  return r;
}

Result gauss_exactness(const Options&) {
  Timer tm;
  Result r{4, "Gauss solver exactness"};
  // Constant data: the default guess and starts displaced from the root,
  // each allowed three Newton steps.
  const TorusGrid g = make_grid(32);
  double worst_err = 0.0;
  int worst_steps = 0;
  json cases = json::array();
  for (double Kg : {-1.0, 0.0})
    for (double a : {0.25, 1.0, 2.0})
      for (cd mu : {cd(0.0), cd(0.3, 0.2)}) {
        ComplexMetric bg{Field(g, 0.0), BeltramiChart::constant(g, mu)};
        GaussProblem pb = make_problem(bg, Field(g, Kg), CubicPair{Field(g, a), Field(g, a)});
        const double c = cubic_norm(bg, pb.C).v[0].real();
        const double root = 0.5 * std::log(constant_root(c, Kg));
        for (double d : {0.0, 0.05, -0.05}) {
          if (d != 0.0) pb.initial = Field(g, root + d);
          SolveOptions o;
          o.max_iter = 3;
          o.throw_on_failure = false;
          SolveReport sr = solve_newton(pb, o);
          const double err = (sr.psi - Field(g, root)).max_abs();
          worst_err = std::max(worst_err, err);
          worst_steps = std::max(worst_steps, sr.iterations);
          cases.push_back({{"Kg", Kg}, {"alpha", a}, {"mu_abs", std::abs(mu)}, {"start_offset", d},
                           {"steps", sr.iterations}, {"error", err}});
        }
      }
  const bool const_ok = worst_err <= 1e-10 && worst_steps <= 3;

  // Non-constant data at N = 128, K_g = 0, mu = 0.3 + 0.1i, beta = 1: the
  // smooth perturbation alpha = 1 + 0.1 e^{2 pi i x} and the discretely
  // holomorphic alpha = 1 + 0.1 (-1)^i.
  const TorusGrid G = make_grid(128);
  BeltramiChart chart = BeltramiChart::constant(G, cd(0.3, 0.1));
  json pert = json::array();
  bool pert_ok = true;
  for (int kind = 0; kind < 2; ++kind) {
    Timer t1;
    Field alpha(G);
    for (int j = 0; j < G.n; ++j)
      for (int i = 0; i < G.n; ++i)
        alpha(i, j) = kind == 0 ? 1.0 + 0.1 * std::exp(cd(0.0, oracle::kTwoPi * G.x(i))) : cd(1.0 + (i % 2 ? -0.1 : 0.1));
    GaussProblem pb = make_problem(ComplexMetric{Field(G, 0.0), chart}, Field(G, 0.0), CubicPair{alpha, Field(G, 1.0)});
    SolveOptions o;
    o.throw_on_failure = false;
    SolveReport sr = solve_newton(pb, o);
    const double res = residual_background(sr.psi, pb).max_abs();
    const double intrinsic = residual_intrinsic(sr.psi, pb).max_abs();
    const double sec = t1.seconds();
    const bool ok = sr.converged && res <= 1e-10 && sec < 60.0;
    pert_ok = pert_ok && ok;
    pert.push_back({{"alpha", kind == 0 ? "1 + 0.1 e^{2 pi i x}" : "1 + 0.1 (-1)^i"},
                    {"dzb_alpha", d_zb(alpha).max_abs()},
                    {"iterations", sr.iterations},
                    {"residual", res},
                    {"residual_intrinsic", intrinsic},
                    {"runtime_ok", sec < 60.0}});
  }
  r.pass = const_ok && pert_ok;
  r.metrics = {{"constant_cases", cases},
               {"constant_max_error", worst_err},
               {"constant_max_steps", worst_steps},
               {"perturbed", pert}};
  r.summary = "constant error " + fmt("%.1e", worst_err) + " in <= " + std::to_string(worst_steps) +
              " steps; perturbed residual " + fmt("%.1e", pert[0]["residual"].get<double>()) + " at N=128";
  r.seconds = tm.seconds();
  return r;
}

Result flatness(const Options&) {
  Timer tm;
  Result r{5, "Maurer-Cartan flatness of the assembled connection"};
  json solved = json::array();
  bool ok = true;
  for (int n : {64, 128}) {
    for (int which = 0; which < 2; ++which) {
      Solved s = solve_and_assemble(which == 0 ? solved_datum_config(n) : wang_config(n));
      const double h = 1.0 / n;
      const double mc = maurer_cartan_residual(s.conn).max_abs();
      ok = ok && mc <= 10 * h * h;
      solved.push_back({{"datum", which == 0 ? "shear chart, background psi_g" : "Hitchin locus q = 1"},
                        {"n", n},
                        {"newton_iterations", s.sr.iterations},
                        {"mc_residual", mc},
                        {"bound", 10 * h * h}});
    }
  }
  // Constant data with K_g = 0 has the closed-form solution e^{6 psi} = 8c,
  // c = ||C||^2 of the background, on any constant chart.
  json exact = json::array();
  double worst_exact = 0.0;
  const TorusGrid g = make_grid(64);
  for (cd mu : {cd(0.0), cd(0.3, 0.2)})
    for (cd beta : {cd(1.0), cd(0.7), cd(0.5, 0.5)}) {
      ComplexMetric bg{Field(g, 0.0), BeltramiChart::constant(g, mu)};
      CubicPair C{Field(g, 1.0), Field(g, beta)};
      const cd c = cubic_norm(bg, C).v[0];
      const Field psi(g, std::log(8.0 * c) / 6.0);
      const double mc = maurer_cartan_residual(assemble(psi, C, bg.chart)).max_abs();
      worst_exact = std::max(worst_exact, mc);
      exact.push_back({{"mu", json::array({mu.real(), mu.imag()})},
                       {"beta", json::array({beta.real(), beta.imag()})},
                       {"mc_residual", mc}});
    }
  const bool solved_ok = ok;
  ok = ok && worst_exact <= 1e-13;
  r.pass = ok;
  r.metrics = {{"solved", solved}, {"constant", exact}};
  r.summary = "solved data <= 10 h^2: " + std::string(solved_ok ? "yes" : "no") + ", constant data " + fmt("%.1e", worst_exact);
  r.seconds = tm.seconds();
  return r;
}

Result holonomy(const Options&) {
  Timer tm;
  Result r{6, "period holonomies of solved data"};
  json rows = json::array();
  bool ok = true;
  for (int n : {64, 128}) {
    Solved s = solve_and_assemble(solved_datum_config(n));
    BcMat3 X = bct::holonomy(s.conn, Loop::x_period(n)), Y = bct::holonomy(s.conn, Loop::y_period(n));
    const double det = std::max(std::abs(X.plus.determinant() - 1.0), std::abs(Y.plus.determinant() - 1.0));
    const double comm = (X * Y - Y * X).max_abs();
    const double compat = std::max(phi_compat_residual(X), phi_compat_residual(Y));
    const double h = 1.0 / n;
    ok = ok && det <= 1e-9 && comm <= 10 * h && compat <= 1e-9;
    rows.push_back({{"n", n}, {"det_defect", det}, {"commutator", comm}, {"commutator_bound", 10 * h}, {"compat", compat}});
  }
  r.pass = ok;
  r.metrics = {{"grids", rows}};
  r.summary = "det " + fmt("%.1e", rows[1]["det_defect"].get<double>()) + ", commutator " +
              fmt("%.1e", rows[1]["commutator"].get<double>()) + ", compat " +
              fmt("%.1e", rows[1]["compat"].get<double>()) + " at N=128";
  r.seconds = tm.seconds();
  return r;
}

Result goldman(const Options&) {
  Timer tm;
  Result r{7, "Goldman pairing at the Fuchsian point"};
  json rows = json::array();
  double rmin = 1e300, rmax = -1e300, hv = 0.0, p11 = 0.0;
  bool positive = true;
  for (int n : {32, 64, 128}) {
    const TorusGrid g = make_grid(n);
    Field psig = oracle::trig_field(g, 0.1);
    GaussProblem pb = make_problem(ComplexMetric{psig, BeltramiChart::constant(g, 0.0)}, Field(g, -1.0),
                                   CubicPair{Field(g, 0.0), Field(g, 0.0)});
    Field psi = solve_newton(pb).psi + psig;
    const double t = 1e-3;
    const Field one(g, 1.0), zero(g, 0.0);
    auto conn = [&](const Field& a, const Field& b, cd mu) {
      return assemble(psi, CubicPair{a, b}, BeltramiChart::constant(g, mu));
    };
    // Vertical directions: q1-dot = 1 and q2-dot = -i; horizontal: the chart.
    Variation v1 = variation_from_conn(conn(t * one, zero, 0.0), conn(-t * one, zero, 0.0), 2 * t);
    Variation v2 = variation_from_conn(conn(zero, cd(0, -t) * one, 0.0), conn(zero, cd(0, t) * one, 0.0), 2 * t);
    const cd dmu(0.3 * t, 0.1 * t);
    Variation hz = variation_from_conn(conn(zero, zero, dmu), conn(zero, zero, -dmu), 2 * t);
    const cd p12 = goldman_pairing(v1, v2);
    // Weight of |q1-dot|^2 = 1 against the area form 2 e^{2psi} dx dy.
    double I = 0.0;
    const double cell = g.h() * g.h();
    for (const cd& p : psi.v) I += std::exp(-6.0 * p.real()) * 2.0 * std::exp(2.0 * p.real()) * cell;
    const double ratio = p12.real() / I;
    positive = positive && p12.real() > 0.0;
    rmin = std::min(rmin, ratio);
    rmax = std::max(rmax, ratio);
    hv = std::max({hv, std::abs(goldman_pairing(hz, v1)), std::abs(goldman_pairing(hz, v2))});
    p11 = std::max(p11, std::abs(goldman_pairing(v1, v1)));
    rows.push_back({{"n", n}, {"pairing", json::array({p12.real(), p12.imag()})}, {"weighted_area", I}, {"ratio", ratio}});
  }
  const double spread = rmax / rmin - 1.0;
  r.pass = positive && spread <= 0.01 && hv <= 1e-10;
  r.metrics = {{"grids", rows}, {"ratio_spread", spread}, {"vertical_horizontal", hv}, {"self_pairing", p11}};
  r.summary = "ratio " + fmt("%.6f", rmin) + ", spread " + fmt("%.1e", spread) + " (<= 1%), vertical/horizontal " +
              fmt("%.1e", hv);
  r.seconds = tm.seconds();
  return r;
}

Result affine_roundtrip(const Options&) {
  Timer tm;
  Result r{8, "affine sphere roundtrip on Wang data"};
  const int n = 128;
  const double h = 1.0 / n, bound = 20 * h * h;
  Solved s = solve_and_assemble(wang_config(n));
  FrameReport fr;
  AffinePair raw = integrate_frame(s.conn, 3, s.cfg.tolerances.path, &fr);
  NormalizeReport nr;
  AffinePair pair = normalize_lift(raw, &nr);
  StructureReport sp = structure_residuals(pair, false), sm = structure_residuals(pair, true);
  double blaschke = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const size_t q = size_t(j) * n + i;
      const double rho = 2.0 * std::exp(2.0 * s.psi(i, j).real());
      blaschke = std::max(blaschke, max_abs_entry(sp.data.gB[q] - rho * Mat2d::Identity()));
    }
  const json m = {{"pairing", pairing_defect(pair)},
                  {"conormal", conormal_defect(pair)},
                  {"shape_plus_identity", std::max(sp.S_residual, sm.S_residual)},
                  {"xi_minus_f", std::max(sp.xi_residual, sm.xi_residual)},
                  {"blaschke_vs_h", blaschke},
                  {"pick_sum", pick_dual_residual(sp.data, sm.data)}};
  bool ok = true;
  double worst = 0.0;
  for (auto it = m.begin(); it != m.end(); ++it) {
    ok = ok && it->get<double>() <= bound;
    worst = std::max(worst, it->get<double>());
  }
  r.pass = ok;
  r.metrics = m;
  r.metrics["bound"] = bound;
  r.metrics["path_residual"] = fr.path_residual;
  r.metrics["lift_curl"] = nr.curl;
  r.summary = "max residual " + fmt("%.2e", worst) + " (<= 20 h^2 = " + fmt("%.2e", bound) + ")";
  r.seconds = tm.seconds();
  return r;
}

Result second_variation(const Options& opt) {
  Timer tm;
  Result r{9, "second variation trace is negative"};
  const int n = 64;
  Solved s = solve_and_assemble(wang_config(n));
  const TorusGrid g = make_grid(n);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> K(-2, 2);
  double worst = -1e300, min_norm = 1e300;
  bool ok = true;
  for (int trial = 0; trial < 10; ++trial) {
    // (1 + 0.5 sin(...), smooth) rotated by a random angle never vanishes.
    const double scale = 0.5 + U(rng) * 0.4 + 1.0, theta = std::numbers::pi * U(rng);
    const int k1 = K(rng), l1 = K(rng), k2 = K(rng), l2 = K(rng);
    const double ph1 = std::numbers::pi * U(rng), ph2 = std::numbers::pi * U(rng), b = U(rng);
    Field Zx(g), Zy(g);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double x = g.x(i), y = g.y(j);
        const double u = scale * (1.0 + 0.5 * std::sin(oracle::kTwoPi * (k1 * x + l1 * y) + ph1));
        const double v = b * std::cos(oracle::kTwoPi * (k2 * x + l2 * y) + ph2);
        Zx(i, j) = std::cos(theta) * u - std::sin(theta) * v;
        Zy(i, j) = std::sin(theta) * u + std::cos(theta) * v;
        min_norm = std::min(min_norm, std::hypot(u, v));
      }
    SecondVariation sv = second_variation_trace(Zx, Zy, s.psi, s.pb.C.alpha);
    for (const cd& t : sv.total.v) {
      worst = std::max(worst, t.real());
      ok = ok && t.real() < 0.0;
    }
  }
  r.pass = ok;
  r.metrics = {{"fields", 10}, {"max_trace", worst}, {"min_abs_Z", min_norm}};
  r.summary = "largest trace over all nodes " + fmt("%.3e", worst) + " (< 0)";
  r.seconds = tm.seconds();
  return r;
}

Result representation(const Options&) {
  Timer tm;
  Result r{10, "Anosov diagnostics"};
  Representation fuchsian = build_representation(ExperimentConfig{});
  AnosovReport a = anosov_scan(fuchsian, 5);
  const int cz = centralizer_check(fuchsian);
  Representation red = reducible_example();
  AnosovReport b = anosov_scan(red, 5);
  const double sec = tm.seconds();
  const bool fuchsian_ok = a.passed && a.min_transversality >= 0.01 && cz == 1;
  const bool reducible_ok = !b.passed && b.min_transversality < 1e-10;
  r.pass = fuchsian_ok && reducible_ok && sec < 30.0;
  r.metrics = {{"fuchsian", {{"words", a.words_checked},
                             {"all_loxodromic", a.all_loxodromic},
                             {"min_transversality", a.min_transversality},
                             {"min_gap_ratio", a.min_gap_ratio},
                             {"centralizer_dim", cz},
                             {"passed", a.passed}}},
               {"reducible", {{"all_loxodromic", b.all_loxodromic},
                              {"min_transversality", b.min_transversality},
                              {"worst_pair", b.worst_pair},
                              {"centralizer_dim", centralizer_check(red)},
                              {"passed", b.passed}}},
               {"runtime_ok", sec < 30.0}};
  r.summary = "Fuchsian transversality " + fmt("%.3f", a.min_transversality) + ", centralizer " +
              std::to_string(cz) + "; reducible " + fmt("%.1e", b.min_transversality);
  r.seconds = sec;
  return r;
}

Result run(int id, const Options& opt) {
  switch (id) {
    case 1: return algebra(opt);
    case 2: return laplacian_convergence(opt);
    case 3: return stokes(opt);
    case 4: return gauss_exactness(opt);
    case 5: return flatness(opt);
    case 6: return holonomy(opt);
    case 7: return goldman(opt);
    case 8: return affine_roundtrip(opt);
    case 9: return second_variation(opt);
    case 10: return representation(opt);
  }
  throw Error(Errc::ConfigError, "no criterion " + std::to_string(id));
}

json to_json(const Result& r) {
  return {{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"summary", r.summary}, {"metrics", r.metrics}};
}

std::string line(const Result& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "criterion %2d %s  %s: %s (%.2f s)", r.id, r.pass ? "PASS" : "FAIL", r.title.c_str(),
                r.summary.c_str(), r.seconds);
  return buf;
}

}  // namespace bct::criteria

#pragma once

// Experiment configuration, run manifests and field/CSV serialization.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bct/bicomplex.hpp"
#include "bct/gauss.hpp"
#include "bct/replib.hpp"

namespace bct {

using json = nlohmann::json;

struct ChartSpec {
  std::string kind = "constant";  // constant | shear | file
  cd mu = 0.0;                    // constant
  double eps = 0.0;               // shear: w = z + eps sin(2 pi y) / (2 pi)
  std::string file;               // CSV: i,j,mu_re,mu_im,dwz_re,dwz_im,dzbwb_re,dzbwb_im
};

struct BackgroundSpec {
  std::string Kg = "curvature";  // "-1" | "0" | "curvature" (of the background metric)
  double psi_amplitude = 0.0;    // psi_g = A sin(2 pi x) cos(2 pi y)
};

struct CubicSpec {
  cd alpha = 0.0;
  std::optional<cd> beta;  // defaults to alpha
  double perturbation = 0.0;  // alpha += A e^{2 pi i x}
  bool project = false;       // project alpha, beta to the discrete kernel of d_zb
  std::string alpha_file, beta_file;
};

struct SolverSpec {
  double tol = 1e-10;
  int max_iter = 50;
  int max_halvings = 10;
  int linear_max_iter = 20000;
};

struct ToleranceSpec {
  double path = 1e-3;
  double flatness_factor = 10.0;
  double affine_factor = 20.0;
};

struct RepSpec {
  std::vector<std::string> names;
  std::vector<Mat3> generators;
  std::vector<std::string> relations;
  double fuchsian_ell = 1.0;  // used when no generators are given
  double fuchsian_angle = 0.7853981633974483;
  int max_len = 5;
  double gap_tol = 1e-6;
  double transversality_tol = 1e-8;
  double goldman_step = 1e-3;
};

struct ExperimentConfig {
  int grid = 64;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out;
  ChartSpec chart;
  BackgroundSpec background;
  CubicSpec cubic;
  SolverSpec solver;
  ToleranceSpec tolerances;
  RepSpec rep;
};

// Throws ConfigError on unknown keys, wrong types or out-of-range values.
ExperimentConfig parse_config(const json& j);
ExperimentConfig load_config(const std::string& path);
// Canonical form with every default filled in; parse_config(to_json(c)) == c.
json to_json(const ExperimentConfig& c);
// FNV-1a 64 of the canonical dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

BeltramiChart build_chart(const ExperimentConfig& c);
Field background_psi(const ExperimentConfig& c);
CubicPair build_cubic(const ExperimentConfig& c);
GaussProblem build_problem(const ExperimentConfig& c);
SolveOptions solve_options(const ExperimentConfig& c);
// Hitchin locus: flat mu = 0 chart, alpha = beta, real data.
bool is_hitchin_locus(const ExperimentConfig& c);
Representation build_representation(const ExperimentConfig& c);

json bicomplex_json(const Bicomplex& w);
Bicomplex bicomplex_from_json(const json& j);
json bcmat3_json(const BcMat3& X);
json mat3_json(const Mat3& M);
Mat3 mat3_from_json(const json& j);

// Rows i,j,x,y,re,im in row-major order.
void write_field_csv(const std::string& path, const Field& f);
Field read_field_csv(const std::string& path, TorusGrid g);
void write_text(const std::string& path, const std::string& text);

struct RunManifest {
  std::string command;
  std::string config_hash;
  json config;
  json stages = json::object();
  json criteria = json::object();
  bool passed = true;

  json to_json() const;
};

}  // namespace bct

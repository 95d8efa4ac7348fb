#pragma once

// The ten acceptance criteria as runnable checks, shared by the CLI and the
// acceptance test.

#include <cstdint>
#include <string>
#include <utility>

#include "bct/io.hpp"

namespace bct::criteria {

struct Result {
  Result() = default;
  Result(int i, std::string t) : id(i), title(std::move(t)) {}

  int id = 0;
  std::string title;
  bool pass = false;
  json metrics = json::object();
  std::string summary;
  double seconds = 0.0;
};

struct Options {
  std::uint64_t seed = 1;
};

Result algebra(const Options& opt);            // 1
Result laplacian_convergence(const Options&);  // 2
Result stokes(const Options&);                 // 3
Result gauss_exactness(const Options&);        // 4
Result flatness(const Options&);               // 5
Result holonomy(const Options&);               // 6
Result goldman(const Options&);                // 7
Result affine_roundtrip(const Options&);       // 8
Result second_variation(const Options& opt);   // 9
Result representation(const Options&);         // 10

Result run(int id, const Options& opt);
// json without the timing, so manifests stay byte-identical across runs.
json to_json(const Result& r);
std::string line(const Result& r);

// The background-perturbation datum used for flatness and holonomy: shear
// chart w_z = 1 - (i eps/2) cos(2 pi y), psi_g = 0.1 sin(2 pi x) cos(2 pi y),
// K_g its curvature, alpha = beta = 1.
ExperimentConfig solved_datum_config(int n);
// The Hitchin-locus datum q = 1 over the flat square torus.
ExperimentConfig wang_config(int n);
// Two-generator reducible example: block-diagonal lifts of the Fuchsian pair.
Representation reducible_example();

}  // namespace bct::criteria

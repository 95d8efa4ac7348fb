#pragma once

// Gauss equation of a complex Lagrangian minimal surface, written for the
// unknown conformal factor psi of h = e^{2 psi} g over a background metric g.

#include <vector>

#include "bct/metric.hpp"

namespace bct {

struct GaussProblem {
  ComplexMetric background;  // g
  Field Kg;                  // curvature field of g entering the equation
  CubicPair C;
  Field initial;             // psi_0; empty means "use the default guess"
};

// Checks the symbol on every chart node (ConfigError) and fills the default
// initial guess when none is set.
GaussProblem make_problem(ComplexMetric background, Field Kg, CubicPair C);

// Keeps the part of f in the kernel of the centered d_zb on the torus: the
// mean and the three Nyquist modes.
Field project_holomorphic(const Field& f);

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 50;
  int max_halvings = 10;
  int linear_max_iter = 20000;
  bool throw_on_failure = true;
};

struct SolveReport {
  Field psi;
  int iterations = 0;
  std::vector<double> residual_history;  // max-abs residual before each step
  std::vector<int> linear_iterations;
  bool converged = false;
};

// Delta_g psi - K_g - e^{2psi} + 8 e^{-4psi} ||C||_g^2
Field residual_background(const Field& psi, const GaussProblem& pb);
// Delta_h psi + 8||C||_h^2 - 1 with h = e^{2psi} g; needs psi_g = 0.
// Throws ChartMismatch otherwise.
Field residual_intrinsic(const Field& psi, const GaussProblem& pb);
// Largest positive root u of -Kg - u + 8c/u^2 = 0. Throws NoPositiveRoot.
double constant_root(double c, double Kg);
// Throws DidNotConverge or LinearSolveFailure unless throw_on_failure is off.
SolveReport solve_newton(const GaussProblem& pb, const SolveOptions& opt = {});

// Hitchin-locus problem alpha = beta = q over the flat mu = 0 chart.
GaussProblem wang_specialize(const Field& q, double Kg = 0.0);
// K_h - 2||q_W||^2 + 1 where q_W = C - iC(J.,.,.) = 2q is the Pick
// differential and ||q_W||^2 = |q_W|^2 / (8 e^{6psi}).
Field wang_residual(const Field& psi, const Field& q);

}  // namespace bct

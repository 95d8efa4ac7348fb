#pragma once

// Krylov solvers for complex-linear grid operators, run on the real/imaginary
// split (a field of n^2 complex values is a real vector of length 2 n^2).

#include <functional>

#include "bct/grid.hpp"

namespace bct {

using LinearOp = std::function<Field(const Field&)>;

struct SolveStats {
  int iterations = 0;
  double rel_residual = 0.0;
};

// Jacobi-preconditioned BiCGSTAB. `diag` is the complex diagonal of the
// operator; its real part (or modulus when the real part is tiny) scales both
// halves of the split system. Throws LinearSolveFailure.
Field bicgstab(const LinearOp& A, const Field& b, const Field& diag, double rtol, int max_iter,
               SolveStats* stats = nullptr);

// Conjugate gradients for a symmetric semi-definite operator whose kernel is
// the constants; the right-hand side and iterates are kept at zero mean.
Field cg_zero_mean(const LinearOp& A, const Field& b, double rtol, int max_iter,
                   SolveStats* stats = nullptr);

double dot_real(const Field& a, const Field& b);

}  // namespace bct

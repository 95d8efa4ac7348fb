#include "bct/linsolve.hpp"

#include <cmath>

#include "bct/errors.hpp"

namespace bct {

double dot_real(const Field& a, const Field& b) {
  double s = 0.0;
  for (size_t q = 0; q < a.v.size(); ++q) s += a.v[q].real() * b.v[q].real() + a.v[q].imag() * b.v[q].imag();
  return s;
}

namespace {

double norm2(const Field& a) { return std::sqrt(dot_real(a, a)); }

void axpy(Field& y, double a, const Field& x) {
  for (size_t q = 0; q < y.v.size(); ++q) y.v[q] += a * x.v[q];
}

Field precondition(const std::vector<double>& inv, const Field& r) {
  Field z(r.grid);
  for (size_t q = 0; q < r.v.size(); ++q) z.v[q] = inv[q] * r.v[q];
  return z;
}

void remove_mean(Field& f) {
  cd m = f.mean();
  for (cd& z : f.v) z -= m;
}

}  // namespace

Field bicgstab(const LinearOp& A, const Field& b, const Field& diag, double rtol, int max_iter,
               SolveStats* stats) {
  std::vector<double> inv(b.v.size());
  for (size_t q = 0; q < inv.size(); ++q) {
    double re = diag.v[q].real(), mag = std::abs(diag.v[q]);
    double p = std::abs(re) >= 0.1 * mag ? re : mag;
    inv[q] = p != 0.0 ? 1.0 / p : 1.0;
  }

  Field x(b.grid, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    if (stats) *stats = {0, 0.0};
    return x;
  }
  Field r = b;
  Field rhat = r;
  Field p(b.grid, 0.0), v(b.grid, 0.0);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  double rel = 1.0;
  int restarts = 0;

  for (int it = 1; it <= max_iter; ++it) {
    double rho_new = dot_real(rhat, r);
    if (std::abs(rho_new) < 1e-300 * bnorm * bnorm || omega == 0.0) {
      if (++restarts > 5) break;
      rhat = r;
      p = Field(b.grid, 0.0);
      v = Field(b.grid, 0.0);
      rho = alpha = omega = 1.0;
      rho_new = dot_real(rhat, r);
    }
    double beta = (rho_new / rho) * (alpha / omega);
    for (size_t q = 0; q < p.v.size(); ++q) p.v[q] = r.v[q] + beta * (p.v[q] - omega * v.v[q]);
    Field y = precondition(inv, p);
    v = A(y);
    double rv = dot_real(rhat, v);
    if (rv == 0.0) break;
    alpha = rho_new / rv;
    axpy(x, alpha, y);
    Field s = r;
    axpy(s, -alpha, v);
    rel = norm2(s) / bnorm;
    if (rel <= rtol) {
      if (stats) *stats = {it, rel};
      return x;
    }
    Field z = precondition(inv, s);
    Field t = A(z);
    double tt = dot_real(t, t);
    omega = tt > 0.0 ? dot_real(t, s) / tt : 0.0;
    axpy(x, omega, z);
    r = s;
    axpy(r, -omega, t);
    rho = rho_new;
    rel = norm2(r) / bnorm;
    if (rel <= rtol) {
      if (stats) *stats = {it, rel};
      return x;
    }
  }
  throw Error(Errc::LinearSolveFailure, "BiCGSTAB stalled at relative residual " + std::to_string(rel));
}

Field cg_zero_mean(const LinearOp& A, const Field& b0, double rtol, int max_iter, SolveStats* stats) {
  Field b = b0;
  remove_mean(b);
  Field x(b.grid, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    if (stats) *stats = {0, 0.0};
    return x;
  }
  Field r = b, p = b;
  double rr = dot_real(r, r);
  for (int it = 1; it <= max_iter; ++it) {
    Field Ap = A(p);
    double pAp = dot_real(p, Ap);
    if (pAp == 0.0) break;
    double a = rr / pAp;
    axpy(x, a, p);
    axpy(r, -a, Ap);
    remove_mean(r);
    double rr_new = dot_real(r, r);
    if (std::sqrt(rr_new) / bnorm <= rtol) {
      remove_mean(x);
      if (stats) *stats = {it, std::sqrt(rr_new) / bnorm};
      return x;
    }
    double beta = rr_new / rr;
    for (size_t q = 0; q < p.v.size(); ++q) p.v[q] = r.v[q] + beta * p.v[q];
    rr = rr_new;
  }
  throw Error(Errc::LinearSolveFailure, "CG did not reach the requested tolerance");
}

}  // namespace bct

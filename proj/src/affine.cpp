#include "bct/affine.hpp"

#include <cmath>
#include <future>

#include "bct/errors.hpp"
#include "bct/linsolve.hpp"

namespace bct {

namespace {

using Mat3d = Eigen::Matrix3d;

// Centered differences on a patch.
template <class T>
T pdx(const Patch<T>& p, int i, int j) {
  return (p.at(i + 1, j) - p.at(i - 1, j)) / (2.0 * p.h);
}
template <class T>
T pdy(const Patch<T>& p, int i, int j) {
  return (p.at(i, j + 1) - p.at(i, j - 1)) / (2.0 * p.h);
}
template <class T>
T pdxx(const Patch<T>& p, int i, int j) {
  return (p.at(i + 1, j) - 2.0 * p.at(i, j) + p.at(i - 1, j)) / (p.h * p.h);
}
template <class T>
T pdyy(const Patch<T>& p, int i, int j) {
  return (p.at(i, j + 1) - 2.0 * p.at(i, j) + p.at(i, j - 1)) / (p.h * p.h);
}
template <class T>
T pdxy(const Patch<T>& p, int i, int j) {
  return (p.at(i + 1, j + 1) - p.at(i + 1, j - 1) - p.at(i - 1, j + 1) + p.at(i - 1, j - 1)) / (4.0 * p.h * p.h);
}

// Swaps the first two basis vectors.
Mat3 swap12() {
  Mat3 s = Mat3::Zero();
  s(0, 1) = s(1, 0) = 1.0;
  s(2, 2) = 1.0;
  return s;
}

Mat3d qreal() { return Eigen::Vector3d(1.0, 1.0, -1.0).asDiagonal(); }

enum class Order { RowsFirst, ColumnsFirst };

// Frames over the patch by stepping F <- F exp(+-h Omega(midpoint)).
Patch<BcMat3> integrate(const FlatConnectionField& conn, int ghost, Order order) {
  const int n = conn.grid().n;
  const double h = conn.grid().h();
  Patch<BcMat3> F(n, ghost, h, BcMat3::zero());
  auto step_x = [&](int i, int j, int di) {
    BcMat3 mid = 0.5 * (conn.omega_x(i, j) + conn.omega_x(i + di, j));
    F.at(i + di, j) = F.at(i, j) * expm((di * h) * mid);
  };
  auto step_y = [&](int i, int j, int dj) {
    BcMat3 mid = 0.5 * (conn.omega_y(i, j) + conn.omega_y(i, j + dj));
    F.at(i, j + dj) = F.at(i, j) * expm((dj * h) * mid);
  };
  const int lo = -ghost, hi = n + ghost - 1;
  F.at(0, 0) = base_frame();
  if (order == Order::RowsFirst) {
    for (int i = 0; i < hi; ++i) step_x(i, 0, 1);
    for (int i = 0; i > lo; --i) step_x(i, 0, -1);
    for (int i = lo; i <= hi; ++i) {
      for (int j = 0; j < hi; ++j) step_y(i, j, 1);
      for (int j = 0; j > lo; --j) step_y(i, j, -1);
    }
  } else {
    for (int j = 0; j < hi; ++j) step_y(0, j, 1);
    for (int j = 0; j > lo; --j) step_y(0, j, -1);
    for (int j = lo; j <= hi; ++j) {
      for (int i = 0; i < hi; ++i) step_x(i, j, 1);
      for (int i = 0; i > lo; --i) step_x(i, j, -1);
    }
  }
  return F;
}

double reality_defect(const BcMat3& X, const Mat3& S) {
  return std::max((X.plus.conjugate() - S * X.plus * S).cwiseAbs().maxCoeff(),
                  (X.minus.conjugate() - S * X.minus * S).cwiseAbs().maxCoeff());
}

// Coefficients of v in the basis given by the columns of M.
Vec3d solve3(const Mat3d& M, const Vec3d& v) { return M.partialPivLu().solve(v); }

struct NodeGeom {
  Mat2d g = Mat2d::Zero();
  double gamma[2][2][2]{};  // Gamma^k_ij of the decomposition against f
};

}  // namespace

double pairing_defect(const AffinePair& pair) {
  double r = 0.0;
  for (int j = 0; j < pair.n(); ++j)
    for (int i = 0; i < pair.n(); ++i) r = std::max(r, std::abs(pair.fminus.at(i, j).dot(pair.fplus.at(i, j)) + 1.0));
  return r;
}

double conormal_defect(const AffinePair& pair) {
  double r = 0.0;
  for (int j = 0; j < pair.n(); ++j)
    for (int i = 0; i < pair.n(); ++i) {
      const Vec3d& phi = pair.fminus.at(i, j);
      r = std::max({r, std::abs(phi.dot(pdx(pair.fplus, i, j))), std::abs(phi.dot(pdy(pair.fplus, i, j)))});
    }
  return r;
}

AffinePair normalize_lift(const AffinePair& pair, NormalizeReport* report) {
  const int n = pair.n();
  if (pair.ghost() < 1) throw Error(Errc::ConfigError, "normalize_lift needs at least one ghost layer");
  const TorusGrid g{n};
  const double h = pair.h();
  Field Fx(g), Fy(g);
  double scale = 1.0, cross = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Vec3d& phi = pair.fminus.at(i, j);
      Vec3d fx = pdx(pair.fplus, i, j), fy = pdy(pair.fplus, i, j);
      Fx(i, j) = fx.dot(phi);
      Fy(i, j) = fy.dot(phi);
      double a = fx.dot(pdy(pair.fminus, i, j)), b = fy.dot(pdx(pair.fminus, i, j));
      cross = std::max(cross, std::abs(a) + std::abs(b));
    }
  scale = std::max(scale, cross);

  Field curl = d_x(Fy) - d_y(Fx);
  NormalizeReport rep;
  rep.curl = curl.max_abs();
  rep.threshold = 10.0 * h * h * scale;
  if (rep.curl > rep.threshold) throw Error(Errc::NotIsotropic, "the lift has no potential: curl exceeds 10 h^2");

  // -(5-point Laplacian) mu = -div F, zero mean.
  Field rhs = -(d_x(Fx) + d_y(Fy));
  LinearOp negLap = [](const Field& u) { return -4.0 * d_zzb(u); };
  rep.mu = cg_zero_mean(negLap, rhs, 1e-12, 20 * n * n);

  AffinePair out = pair;
  const int G = pair.ghost();
  for (int j = -G; j < n + G; ++j)
    for (int i = -G; i < n + G; ++i) {
      double mu = rep.mu(i, j).real();
      out.fplus.at(i, j) *= std::exp(mu);
      out.fminus.at(i, j) *= std::exp(-mu);
    }
  if (report) *report = std::move(rep);
  return out;
}

AffinePair integrate_frame(const FlatConnectionField& conn, int ghost, double path_tol, FrameReport* report) {
  const TorusGrid g = conn.grid();
  const Mat3 S = swap12();
  FrameReport rep;
  double scale = 0.0;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i)
      for (const BcMat3& X : {conn.omega_x(i, j), conn.omega_y(i, j)}) {
        scale = std::max(scale, X.max_abs());
        rep.reality_residual = std::max(rep.reality_residual, reality_defect(X, S));
      }
  if (rep.reality_residual > 1e-10 * std::max(1.0, scale))
    throw Error(Errc::NotReal, "connection fails the real structure of Hitchin-locus data");

  auto other = std::async(std::launch::async, [&] { return integrate(conn, ghost, Order::ColumnsFirst); });
  Patch<BcMat3> F = integrate(conn, ghost, Order::RowsFirst);
  Patch<BcMat3> F2 = other.get();

  double diff = 0.0, size = 0.0;
  for (size_t q = 0; q < F.v.size(); ++q) {
    diff = std::max(diff, (F.v[q] - F2.v[q]).max_abs());
    size = std::max(size, F.v[q].max_abs());
  }
  rep.path_residual = diff / size;
  if (rep.path_residual > path_tol) throw Error(Errc::PathDependent, "row-first and column-first frames disagree");

  const Mat3d Q = qreal();
  AffinePair pair{Patch<Vec3d>(g.n, ghost, g.h(), Vec3d::Zero()), Patch<Vec3d>(g.n, ghost, g.h(), Vec3d::Zero())};
  for (size_t q = 0; q < F.v.size(); ++q) {
    Vec3 sp = F.v[q].plus.col(2);
    Vec3 sm = Q.cast<cd>() * F.v[q].minus.col(2);
    pair.fplus.v[q] = sp.real();
    pair.fminus.v[q] = sm.real();
    rep.imag_residual = std::max({rep.imag_residual, sp.imag().cwiseAbs().maxCoeff(), sm.imag().cwiseAbs().maxCoeff()});
  }
  if (report) *report = rep;
  return pair;
}

FlatConnectionField tau_swapped(const FlatConnectionField& conn) {
  FlatConnectionField out = conn;
  for (MatField* m : {&out.Ahat, &out.Bhat})
    for (BcMat3& X : m->v) std::swap(X.plus, X.minus);
  return out;
}

StructureReport structure_residuals(const AffinePair& pair, bool minus_side) {
  const Patch<Vec3d>& f = minus_side ? pair.fminus : pair.fplus;
  const int n = f.n, G = f.ghost;
  if (G < 3) throw Error(Errc::ConfigError, "structure_residuals needs three ghost layers");
  const double h = f.h;

  // g and the f-decomposition on [-2, n+2).
  Patch<NodeGeom> geo(n, G, h, NodeGeom{});
  for (int j = -2; j < n + 2; ++j)
    for (int i = -2; i < n + 2; ++i) {
      Mat3d M;
      M << pdx(f, i, j), pdy(f, i, j), f.at(i, j);
      const double det = M.determinant();
      if (std::abs(det) < 1e-10) throw Error(Errc::DegenerateFrame, "det(f_x, f_y, f) vanishes");
      const Vec3d second[3] = {pdxx(f, i, j), pdxy(f, i, j), pdyy(f, i, j)};
      const int ii[3] = {0, 0, 1}, jj[3] = {0, 1, 1};
      NodeGeom& ng = geo.at(i, j);
      Mat2d hh;
      for (int s = 0; s < 3; ++s) {
        Vec3d c = solve3(M, second[s]);
        for (int k = 0; k < 2; ++k) ng.gamma[k][ii[s]][jj[s]] = ng.gamma[k][jj[s]][ii[s]] = c(k);
        hh(ii[s], jj[s]) = hh(jj[s], ii[s]) = c(2);
      }
      ng.g = hh * std::sqrt(std::abs(det)) * std::pow(std::abs(hh.determinant()), -0.25);
    }

  // Levi-Civita symbols and the affine normal on [-1, n+1).
  struct Lc {
    double G[2][2][2]{};
  };
  Patch<Lc> lc(n, G, h, Lc{});
  Patch<Vec3d> xi(n, G, h, Vec3d::Zero());
  for (int j = -1; j < n + 1; ++j)
    for (int i = -1; i < n + 1; ++i) {
      Mat2d dg[2];
      dg[0] = (geo.at(i + 1, j).g - geo.at(i - 1, j).g) / (2.0 * h);
      dg[1] = (geo.at(i, j + 1).g - geo.at(i, j - 1).g) / (2.0 * h);
      const Mat2d gi = geo.at(i, j).g.inverse();
      Lc& L = lc.at(i, j);
      for (int k = 0; k < 2; ++k)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            double s = 0.0;
            for (int l = 0; l < 2; ++l) s += gi(k, l) * (dg[a](l, b) + dg[b](l, a) - dg[l](a, b));
            L.G[k][a][b] = 0.5 * s;
          }
      const Vec3d fd[2] = {pdx(f, i, j), pdy(f, i, j)};
      const Vec3d f2[2][2] = {{pdxx(f, i, j), pdxy(f, i, j)}, {pdxy(f, i, j), pdyy(f, i, j)}};
      Vec3d lap = Vec3d::Zero();
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          Vec3d hess = f2[a][b] - L.G[0][a][b] * fd[0] - L.G[1][a][b] * fd[1];
          lap += gi(a, b) * hess;
        }
      xi.at(i, j) = 0.5 * lap;
    }

  StructureReport R;
  BlaschkeData& D = R.data;
  D.n = n;
  D.h = h;
  const size_t N = size_t(n) * n;
  D.gB.resize(N);
  D.pickC.resize(N);
  D.shapeS.resize(N);
  D.K.resize(N);
  D.xi.resize(N);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const size_t q = size_t(j) * n + i;
      const Vec3d& x0 = xi.at(i, j);
      const Vec3d fd[2] = {pdx(f, i, j), pdy(f, i, j)};
      Mat3d M;
      M << fd[0], fd[1], x0;
      const Mat2d& gg = geo.at(i, j).g;
      D.gB[q] = gg;
      D.xi[q] = x0;
      R.xi_residual = std::max(R.xi_residual, (x0 - f.at(i, j)).norm() / f.at(i, j).norm());

      // D_X xi = -S(X) + t(X) xi
      const Vec3d dxi[2] = {pdx(xi, i, j), pdy(xi, i, j)};
      Mat2d S;
      for (int a = 0; a < 2; ++a) {
        Vec3d c = solve3(M, dxi[a]);
        S(0, a) = -c(0);
        S(1, a) = -c(1);
      }
      D.shapeS[q] = S;
      R.S_residual = std::max(R.S_residual, (S + Mat2d::Identity()).cwiseAbs().maxCoeff());

      // Blaschke connection against xi, then C_abk = g_kl (Gbar^l_ab - LC^l_ab).
      const Vec3d f2[2][2] = {{pdxx(f, i, j), pdxy(f, i, j)}, {pdxy(f, i, j), pdyy(f, i, j)}};
      const Lc& L = lc.at(i, j);
      double A[2][2][2];  // A^l_ab
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          Vec3d c = solve3(M, f2[a][b]);
          for (int l = 0; l < 2; ++l) A[l][a][b] = c(l) - L.G[l][a][b];
        }
      auto& C = D.pickC[q];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int k = 0; k < 2; ++k) C[4 * a + 2 * b + k] = gg(k, 0) * A[0][a][b] + gg(k, 1) * A[1][a][b];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int k = 0; k < 2; ++k) {
            R.pick_symmetry = std::max(R.pick_symmetry, std::abs(C[4 * a + 2 * b + k] - C[4 * b + 2 * a + k]));
            R.pick_symmetry = std::max(R.pick_symmetry, std::abs(C[4 * a + 2 * b + k] - C[4 * a + 2 * k + b]));
          }
      // Keep the totally symmetric part; the raw asymmetry above is O(h^2).
      double sum[4] = {0, 0, 0, 0};
      int cnt[4] = {0, 0, 0, 0};
      for (int k = 0; k < 8; ++k) {
        const int ones = (k >> 2 & 1) + (k >> 1 & 1) + (k & 1);
        sum[ones] += C[k];
        ++cnt[ones];
      }
      for (int k = 0; k < 8; ++k) {
        const int ones = (k >> 2 & 1) + (k >> 1 & 1) + (k & 1);
        C[k] = sum[ones] / cnt[ones];
      }
      for (int a = 0; a < 2; ++a) R.pick_trace = std::max(R.pick_trace, std::abs(A[0][a][0] + A[1][a][1]));

      // R^l_{2,12} = d_1 G^l_22 - d_2 G^l_12 + G^l_1m G^m_22 - G^l_2m G^m_12
      double Rl[2];
      for (int l = 0; l < 2; ++l) {
        double d1 = (lc.at(i + 1, j).G[l][1][1] - lc.at(i - 1, j).G[l][1][1]) / (2.0 * h);
        double d2 = (lc.at(i, j + 1).G[l][0][1] - lc.at(i, j - 1).G[l][0][1]) / (2.0 * h);
        double quad = 0.0;
        for (int m = 0; m < 2; ++m) quad += L.G[l][0][m] * L.G[m][1][1] - L.G[l][1][m] * L.G[m][0][1];
        Rl[l] = d1 - d2 + quad;
      }
      D.K[q] = (gg(0, 0) * Rl[0] + gg(0, 1) * Rl[1]) / gg.determinant();
    }
  return R;
}

WangCheck pick_and_wang(const BlaschkeData& data) {
  WangCheck W;
  const size_t N = data.gB.size();
  W.residual.resize(N);
  W.q.resize(N);
  for (size_t q = 0; q < N; ++q) {
    const auto& C = data.pickC[q];
    const Mat2d gi = data.gB[q].inverse();
    double norm2 = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d)
            for (int e = 0; e < 2; ++e)
              for (int k = 0; k < 2; ++k)
                norm2 += gi(a, d) * gi(b, e) * gi(c, k) * C[4 * a + 2 * b + c] * C[4 * d + 2 * e + k];
    W.residual[q] = data.K[q] - 2.0 * (0.25 * norm2) + 1.0;
    const double cxxx = C[0], cxxy = C[1], cxyy = C[3], cyyy = C[7];
    W.q[q] = 0.25 * cd(cxxx - 3.0 * cxyy, -(3.0 * cxxy - cyyy));
  }
  return W;
}

double pick_dual_residual(const BlaschkeData& plus, const BlaschkeData& minus) {
  double r = 0.0;
  for (size_t q = 0; q < plus.pickC.size(); ++q)
    for (int k = 0; k < 8; ++k) r = std::max(r, std::abs(plus.pickC[q][k] + minus.pickC[q][k]));
  return r;
}

double model_riemann(double k, const Eigen::Vector4d& X, const Eigen::Vector4d& Y, const Eigen::Vector4d& Z,
                     const Eigen::Vector4d& W) {
  const Eigen::Vector4d sig(1.0, 1.0, -1.0, -1.0);
  auto g = [&](const Eigen::Vector4d& a, const Eigen::Vector4d& b) { return (a.cwiseProduct(sig)).dot(b); };
  auto P = [](const Eigen::Vector4d& a) { return Eigen::Vector4d(a(2), a(3), a(0), a(1)); };
  double t = g(X, Z) * g(Y, W) - g(Y, Z) * g(X, W) + g(X, P(Z)) * g(P(Y), W) - g(Y, P(Z)) * g(P(X), W) +
             2.0 * g(X, P(Y)) * g(P(Z), W);
  return -k / 4.0 * t;
}

SecondVariation second_variation_trace(const Field& Zx, const Field& Zy, const Field& psi, const Field& alpha) {
  const TorusGrid grid = psi.grid;
  SecondVariation sv{Field(grid), Field(grid), Field(grid), Field(grid)};
  const Field Z[2] = {Zx, Zy};
  const Field dZ[2][2] = {{d_x(Zx), d_y(Zx)}, {d_x(Zy), d_y(Zy)}};  // dZ[k][j] = d_j Z^k
  const Field dpsi[2] = {d_x(psi), d_y(psi)};
  const Eigen::Vector4d e[2] = {Eigen::Vector4d(1, 0, 0, 0), Eigen::Vector4d(0, 1, 0, 0)};

  for (size_t q = 0; q < psi.v.size(); ++q) {
    const double rho = 2.0 * std::exp(2.0 * psi.v[q].real());
    const double z[2] = {std::sqrt(rho) * Z[0].v[q].real(), std::sqrt(rho) * Z[1].v[q].real()};
    const Eigen::Vector4d PZ(0.0, 0.0, z[0], z[1]);

    double curv = 0.0;
    for (int i = 0; i < 2; ++i) curv += model_riemann(-4.0, PZ, e[i], PZ, e[i]);

    const cd a = alpha.v[q];
    double C[2][2][2];
    const double ca = 2.0 * a.real(), cb = 2.0 * a.imag(), s = std::pow(rho, -1.5);
    C[0][0][0] = s * ca;
    C[0][0][1] = C[0][1][0] = C[1][0][0] = -s * cb;
    C[0][1][1] = C[1][0][1] = C[1][1][0] = -s * ca;
    C[1][1][1] = s * cb;
    double shape = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double b = z[0] * C[i][0][j] + z[1] * C[i][1][j];
        shape -= b * b;
      }

    // nabla_j Z^k with Gamma^k_jm = d_jk phi_m + d_mk phi_j - d_jm phi_k, phi = psi + const.
    const double ph[2] = {dpsi[0].v[q].real(), dpsi[1].v[q].real()};
    const double Zv[2] = {Z[0].v[q].real(), Z[1].v[q].real()};
    double normal = 0.0;
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        double v = dZ[k][j].v[q].real();
        for (int m = 0; m < 2; ++m) {
          double G = (j == k ? ph[m] : 0.0) + (m == k ? ph[j] : 0.0) - (j == m ? ph[k] : 0.0);
          v += G * Zv[m];
        }
        normal -= v * v;
      }

    sv.curvature.v[q] = curv;
    sv.shape.v[q] = shape;
    sv.normal.v[q] = normal;
    sv.total.v[q] = curv + shape + normal;
  }
  return sv;
}

}  // namespace bct

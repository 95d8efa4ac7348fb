#include "bct/replib.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bct/errors.hpp"

namespace bct {

namespace {

char inverse_letter(char c) {
  return std::isupper(static_cast<unsigned char>(c)) ? static_cast<char>(std::tolower(c))
                                                     : static_cast<char>(std::toupper(c));
}

std::string invert_word(const std::string& w) {
  std::string r(w.rbegin(), w.rend());
  for (char& c : r) c = inverse_letter(c);
  return r;
}

Flag unit_flag(const Vec3& line, const Row3& plane) { return {line.normalized(), plane.normalized()}; }

}  // namespace

Mat3 irreducible_embed(const Mat2& A) {
  if (std::abs(A.determinant() - 1.0) > 1e-12) throw Error(Errc::NotUnimodular, "det A != 1");
  const cd a = A(0, 0), b = A(0, 1), c = A(1, 0), d = A(1, 1);
  Mat3 M;
  M << a * a, a * b, b * b,
       2.0 * a * c, a * d + b * c, 2.0 * b * d,
       c * c, c * d, d * d;
  return M;
}

Loxodromy loxodromy(const Mat3& M, double gap_tol) {
  // det is only known to roundoff of order ||M||^3 eps for long words.
  const double nrm = M.cwiseAbs().maxCoeff();
  if (std::abs(M.determinant() - 1.0) > 1e-8 * std::max(1.0, nrm * nrm * nrm))
    throw Error(Errc::NotUnimodular, "det M != 1");
  Eigen::ComplexEigenSolver<Mat3> es(M);
  std::array<int, 3> ord{0, 1, 2};
  const Vec3 ev = es.eigenvalues();
  std::sort(ord.begin(), ord.end(), [&](int x, int y) { return std::abs(ev(x)) > std::abs(ev(y)); });

  Loxodromy L;
  Mat3 V;
  for (int k = 0; k < 3; ++k) {
    L.eigenvalues(k) = ev(ord[k]);
    L.moduli[k] = std::abs(ev(ord[k]));
    V.col(k) = es.eigenvectors().col(ord[k]);
  }
  L.loxodromic = (L.moduli[0] - L.moduli[1]) > gap_tol * L.moduli[0] &&
                 (L.moduli[1] - L.moduli[2]) > gap_tol * L.moduli[1];
  if (!L.loxodromic) return L;

  Eigen::JacobiSVD<Mat3> svd(V);
  const auto& sv = svd.singularValues();
  if (sv(2) < 1e-12 * sv(0)) throw Error(Errc::NotDiagonalizable, "eigenvector matrix is singular");
  Mat3 Vi = V.inverse();
  // Row k of V^{-1} annihilates every eigenvector but the k-th.
  L.attracting = unit_flag(V.col(0), Vi.row(2));
  L.repelling = unit_flag(V.col(2), Vi.row(0));
  return L;
}

double transversality(const Flag& a, const Flag& b) {
  auto pair = [](const Vec3& l, const Row3& phi) { return std::abs((phi * l)(0)) / (l.norm() * phi.norm()); };
  return std::min(pair(a.line, b.plane), pair(b.line, a.plane));
}

void Representation::validate() const {
  if (names.size() != gens.size() || gens.empty()) throw Error(Errc::ConfigError, "generator names and matrices differ");
  for (size_t k = 0; k < gens.size(); ++k) {
    if (names[k].size() != 1 || !std::islower(static_cast<unsigned char>(names[k][0])))
      throw Error(Errc::ConfigError, "generator names must be single lowercase letters");
    if (std::abs(gens[k].determinant() - 1.0) > 1e-10) throw Error(Errc::NotUnimodular, "generator " + names[k]);
  }
  for (const std::string& w : relations)
    if ((eval(w) - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-8)
      throw Error(Errc::ConfigError, "relation " + w + " does not hold");
}

Mat3 Representation::eval(const std::string& word) const {
  Mat3 M = Mat3::Identity();
  for (char c : word) {
    char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    auto it = std::find(names.begin(), names.end(), std::string(1, lower));
    if (it == names.end()) throw Error(Errc::ConfigError, std::string("unknown letter ") + c);
    const Mat3& g = gens[it - names.begin()];
    M = M * (std::isupper(static_cast<unsigned char>(c)) ? Mat3(g.inverse()) : g);
  }
  return M;
}

std::vector<std::string> reduced_words(int n_gens, int max_len, bool cyclically_reduced) {
  std::vector<char> letters;
  for (int k = 0; k < n_gens; ++k) letters.push_back(static_cast<char>('a' + k));
  for (int k = 0; k < n_gens; ++k) letters.push_back(static_cast<char>('A' + k));
  std::vector<std::string> out, frontier{""};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::string> next;
    for (const std::string& w : frontier)
      for (char c : letters)
        if (w.empty() || w.back() != inverse_letter(c)) next.push_back(w + c);
    for (const std::string& w : next)
      if (!cyclically_reduced || w.size() == 1 || w.front() != inverse_letter(w.back())) out.push_back(w);
    frontier = std::move(next);
  }
  return out;
}

AnosovReport anosov_scan(const Representation& rep, int max_len, const AnosovOptions& opt) {
  rep.validate();
  AnosovReport R;
  R.max_len = max_len;
  R.min_gap_ratio = std::numeric_limits<double>::infinity();
  R.min_transversality = std::numeric_limits<double>::infinity();

  struct Point {
    std::string code;  // word whose attracting point this is
    Flag flag;
  };
  std::vector<Point> pts;
  for (const std::string& w : reduced_words(static_cast<int>(rep.gens.size()), max_len, true)) {
    ++R.words_checked;
    Loxodromy L = loxodromy(rep.eval(w), opt.gap_tol);
    R.max_det_defect = std::max(R.max_det_defect, std::abs(L.moduli[0] * L.moduli[1] * L.moduli[2] - 1.0));
    if (!L.loxodromic) {
      R.all_loxodromic = false;
      R.first_failure = w;
      R.min_gap_ratio = 1.0;
      R.min_transversality = 0.0;
      return R;
    }
    R.min_gap_ratio = std::min({R.min_gap_ratio, L.moduli[0] / L.moduli[1], L.moduli[1] / L.moduli[2]});
    pts.push_back({w, L.attracting});
    pts.push_back({invert_word(w), L.repelling});
  }

  // Points whose codings share the leading letter lie in one cylinder and
  // may coincide (proper powers share the points of their root).
  for (size_t x = 0; x < pts.size(); ++x)
    for (size_t y = x + 1; y < pts.size(); ++y) {
      if (pts[x].code.front() == pts[y].code.front()) continue;
      double t = transversality(pts[x].flag, pts[y].flag);
      if (t < R.min_transversality) {
        R.min_transversality = t;
        R.worst_pair = pts[x].code + "+ / " + pts[y].code + "+";
      }
    }
  if (pts.size() < 2 || R.min_transversality == std::numeric_limits<double>::infinity()) R.min_transversality = 0.0;
  R.passed = R.all_loxodromic && R.min_transversality > opt.transversality_tol;
  return R;
}

int centralizer_check(const Representation& rep, double sv_tol) {
  using Mat9 = Eigen::Matrix<cd, Eigen::Dynamic, 9>;
  Mat9 S(9 * static_cast<int>(rep.gens.size()), 9);
  const Mat3 I = Mat3::Identity();
  for (size_t k = 0; k < rep.gens.size(); ++k) {
    const Mat3& g = rep.gens[k];
    // vec(X g) - vec(g X) in column-major vec.
    Eigen::Matrix<cd, 9, 9> blk;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        for (int rr = 0; rr < 3; ++rr)
          for (int cc = 0; cc < 3; ++cc) blk(3 * c + r, 3 * cc + rr) = g(cc, c) * I(r, rr) - I(c, cc) * g(r, rr);
    S.block(9 * static_cast<int>(k), 0, 9, 9) = blk;
  }
  Eigen::JacobiSVD<Mat9> svd(S);
  int dim = 0;
  for (int k = 0; k < 9; ++k)
    if (svd.singularValues()(k) < sv_tol) ++dim;
  return dim;
}

Variation variation_from_conn(const FlatConnectionField& plus, const FlatConnectionField& minus, double two_t) {
  const TorusGrid g = plus.grid();
  Variation v{MatField(g), MatField(g)};
  const double inv = 1.0 / two_t;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      v.dx(i, j) = inv * (plus.omega_x(i, j) - minus.omega_x(i, j));
      v.dy(i, j) = inv * (plus.omega_y(i, j) - minus.omega_y(i, j));
    }
  return v;
}

cd goldman_pairing(const Variation& d1, const Variation& d2) {
  const double cell = d1.dx.grid.h() * d1.dx.grid.h();
  cd sum = 0.0;
  for (size_t q = 0; q < d1.dx.v.size(); ++q)
    sum += (d1.dx.v[q].plus * d2.dy.v[q].plus - d1.dy.v[q].plus * d2.dx.v[q].plus).trace();
  return sum * cell;
}

}  // namespace bct

#pragma once

// Representation-level diagnostics for rho: pi_1 -> SL(3, C).

#include <string>
#include <vector>

#include "bct/chtau.hpp"
#include "bct/connection.hpp"

namespace bct {

using Mat2 = Eigen::Matrix2cd;

// Symmetric square on the monomial basis (x^2, xy, y^2). Throws NotUnimodular.
Mat3 irreducible_embed(const Mat2& A);

struct Loxodromy {
  Vec3 eigenvalues;   // sorted by decreasing modulus
  double moduli[3]{};
  bool loxodromic = false;
  Flag attracting;    // (top eigenvector, span of the top two); set when loxodromic
  Flag repelling;     // attracting flag of M^{-1}
};

// Throws NotUnimodular when |det M - 1| > 1e-8 max(1, |M|_max^3) and NotDiagonalizable when
// the moduli are separated but the eigenvector matrix is numerically singular.
Loxodromy loxodromy(const Mat3& M, double gap_tol = 1e-6);

// min(|phi_b(l_a)|, |phi_a(l_b)|) for unit lines and unit covectors: the
// absolute determinant of a unit line stacked with an orthonormal basis of
// the other flag's plane.
double transversality(const Flag& a, const Flag& b);

struct Representation {
  std::vector<std::string> names;  // one lowercase letter each
  std::vector<Mat3> gens;
  std::vector<std::string> relations;  // words; uppercase letters are inverses

  // Throws NotUnimodular or ConfigError.
  void validate() const;
  Mat3 eval(const std::string& word) const;
};

// Freely reduced words of length 1..max_len over the generators and their
// inverses (uppercase), in lexicographic generation order.
std::vector<std::string> reduced_words(int n_gens, int max_len, bool cyclically_reduced);

struct AnosovOptions {
  double gap_tol = 1e-6;
  double transversality_tol = 1e-8;
};

struct AnosovReport {
  int max_len = 0;
  int words_checked = 0;
  bool all_loxodromic = true;
  std::string first_failure;  // first non-loxodromic word
  double min_gap_ratio = 0.0;         // min over words of min(|l1/l2|, |l2/l3|)
  double min_transversality = 0.0;    // over flag pairs in distinct cylinders
  std::string worst_pair;
  double max_det_defect = 0.0;        // max | |l1 l2 l3| - 1 |
  bool passed = false;                // no obstruction found up to max_len
};

// Samples the boundary points gamma+ and gamma- of cyclically reduced words
// up to max_len and compares the attracting flags of every pair of points
// whose codings start with different letters.
AnosovReport anosov_scan(const Representation& rep, int max_len, const AnosovOptions& opt = {});

// Dimension of the joint kernel of X -> X g - g X over the generators.
int centralizer_check(const Representation& rep, double sv_tol = 1e-8);

// A variation of the flat connection as the (dx, dy) components of dOmega.
struct Variation {
  MatField dx, dy;
};
Variation variation_from_conn(const FlatConnectionField& plus, const FlatConnectionField& minus, double two_t);
// e+-part of the integral of tr(d1 ^ d2) = tr(d1_x d2_y - d1_y d2_x) dx dy.
cd goldman_pairing(const Variation& d1, const Variation& d2);

}  // namespace bct

#pragma once

// Periodic grid fields on the unit torus, z = x + i y, and the centered
// difference operators used throughout.

#include <complex>
#include <functional>
#include <vector>

namespace bct {

using cd = std::complex<double>;

struct TorusGrid {
  int n = 0;

  double h() const { return 1.0 / n; }
  double x(int i) const { return static_cast<double>(i) / n; }
  double y(int j) const { return static_cast<double>(j) / n; }
  int wrap(int k) const { return ((k % n) + n) % n; }
  // Row-major: rows are y = const.
  int idx(int i, int j) const { return wrap(j) * n + wrap(i); }
  int size() const { return n * n; }
};

// Throws ConfigError unless n is a power of two >= 16.
TorusGrid make_grid(int n);

struct Field {
  TorusGrid grid;
  std::vector<cd> v;

  Field() = default;
  explicit Field(TorusGrid g, cd value = 0.0) : grid(g), v(g.size(), value) {}
  static Field from_fn(TorusGrid g, const std::function<cd(double, double)>& f);

  int n() const { return grid.n; }
  cd& operator()(int i, int j) { return v[grid.idx(i, j)]; }
  cd operator()(int i, int j) const { return v[grid.idx(i, j)]; }
  cd* data() { return v.data(); }
  const cd* data() const { return v.data(); }

  double max_abs() const;
  double max_imag() const;
  cd mean() const;

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(const Field& o);
  Field& operator*=(cd s);
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Field a, const Field& b);
Field operator/(const Field& a, const Field& b);
Field operator*(cd s, Field a);
Field operator*(Field a, cd s);
Field operator+(Field a, cd s);
Field operator-(const Field& a);

Field map(const Field& a, const std::function<cd(cd)>& f);
Field fexp(const Field& a);
Field fconj(const Field& a);
Field fpow(const Field& a, int k);
double max_abs_diff(const Field& a, const Field& b);

// Centered second-order differences.
Field d_x(const Field& f);
Field d_y(const Field& f);
Field d_z(const Field& f);    // (d_x - i d_y)/2
Field d_zb(const Field& f);   // (d_x + i d_y)/2
Field d_zzb(const Field& f);  // 5-point Laplacian / 4
Field d_zbzb(const Field& f); // (xx - yy + 2i xy)/4, corner stencil for xy

// Worker count for row-parallel loops. Results never depend on it.
void set_threads(int k);
int threads();
void parallel_rows(int n, const std::function<void(int, int)>& body);

}  // namespace bct

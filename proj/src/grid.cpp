#include "bct/grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "bct/errors.hpp"

namespace bct {

TorusGrid make_grid(int n) {
  if (n < 16 || (n & (n - 1)) != 0)
    throw Error(Errc::ConfigError, "grid size must be a power of two >= 16, got " + std::to_string(n));
  return TorusGrid{n};
}

Field Field::from_fn(TorusGrid g, const std::function<cd(double, double)>& f) {
  Field out(g);
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) out.v[j * g.n + i] = f(g.x(i), g.y(j));
  return out;
}

double Field::max_abs() const {
  double m = 0.0;
  for (const cd& z : v) m = std::max(m, std::abs(z));
  return m;
}

double Field::max_imag() const {
  double m = 0.0;
  for (const cd& z : v) m = std::max(m, std::abs(z.imag()));
  return m;
}

cd Field::mean() const {
  cd s = 0.0;
  for (const cd& z : v) s += z;
  return s / static_cast<double>(v.size());
}

Field& Field::operator+=(const Field& o) {
  for (size_t k = 0; k < v.size(); ++k) v[k] += o.v[k];
  return *this;
}
Field& Field::operator-=(const Field& o) {
  for (size_t k = 0; k < v.size(); ++k) v[k] -= o.v[k];
  return *this;
}
Field& Field::operator*=(const Field& o) {
  for (size_t k = 0; k < v.size(); ++k) v[k] *= o.v[k];
  return *this;
}
Field& Field::operator*=(cd s) {
  for (cd& z : v) z *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Field a, const Field& b) { return a *= b; }
Field operator/(const Field& a, const Field& b) {
  Field out(a.grid);
  for (size_t k = 0; k < a.v.size(); ++k) out.v[k] = a.v[k] / b.v[k];
  return out;
}
Field operator*(cd s, Field a) { return a *= s; }
Field operator*(Field a, cd s) { return a *= s; }
Field operator+(Field a, cd s) {
  for (cd& z : a.v) z += s;
  return a;
}
Field operator-(const Field& a) { return cd(-1.0) * a; }

Field map(const Field& a, const std::function<cd(cd)>& f) {
  Field out(a.grid);
  for (size_t k = 0; k < a.v.size(); ++k) out.v[k] = f(a.v[k]);
  return out;
}

Field fexp(const Field& a) { return map(a, [](cd z) { return std::exp(z); }); }
Field fconj(const Field& a) { return map(a, [](cd z) { return std::conj(z); }); }
Field fpow(const Field& a, int k) {
  return map(a, [k](cd z) {
    cd r = 1.0;
    for (int i = 0; i < k; ++i) r *= z;
    return r;
  });
}

double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (size_t k = 0; k < a.v.size(); ++k) m = std::max(m, std::abs(a.v[k] - b.v[k]));
  return m;
}

Field d_x(const Field& f) {
  const int n = f.n();
  const double s = 0.5 * n;
  Field out(f.grid);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out(i, j) = s * (f(i + 1, j) - f(i - 1, j));
  return out;
}

Field d_y(const Field& f) {
  const int n = f.n();
  const double s = 0.5 * n;
  Field out(f.grid);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out(i, j) = s * (f(i, j + 1) - f(i, j - 1));
  return out;
}

Field d_z(const Field& f) {
  const int n = f.n();
  const double s = 0.25 * n;
  const cd I(0, 1);
  Field out(f.grid);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      out(i, j) = s * ((f(i + 1, j) - f(i - 1, j)) - I * (f(i, j + 1) - f(i, j - 1)));
  return out;
}

Field d_zb(const Field& f) {
  const int n = f.n();
  const double s = 0.25 * n;
  const cd I(0, 1);
  Field out(f.grid);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      out(i, j) = s * ((f(i + 1, j) - f(i - 1, j)) + I * (f(i, j + 1) - f(i, j - 1)));
  return out;
}

Field d_zzb(const Field& f) {
  const int n = f.n();
  const double s = 0.25 * n * n;
  Field out(f.grid);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      out(i, j) = s * (f(i + 1, j) + f(i - 1, j) + f(i, j + 1) + f(i, j - 1) - 4.0 * f(i, j));
  return out;
}

Field d_zbzb(const Field& f) {
  const int n = f.n();
  const double s = 0.25 * n * n;
  const cd halfI(0, 0.5);
  Field out(f.grid);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      cd xx_yy = f(i + 1, j) + f(i - 1, j) - f(i, j + 1) - f(i, j - 1);
      cd xy = f(i + 1, j + 1) - f(i - 1, j + 1) - f(i + 1, j - 1) + f(i - 1, j - 1);
      out(i, j) = s * (xx_yy + halfI * xy);
    }
  return out;
}

namespace {
std::atomic<int> g_threads{1};
}

void set_threads(int k) { g_threads = std::max(1, k); }
int threads() { return g_threads; }

void parallel_rows(int n, const std::function<void(int, int)>& body) {
  int k = std::min(threads(), n);
  if (k <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(k);
  for (int t = 0; t < k; ++t) {
    int j0 = n * t / k, j1 = n * (t + 1) / k;
    pool.emplace_back([&body, j0, j1] { body(j0, j1); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace bct

#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <complex>

namespace polyscat {

using Complex = std::complex<double>;

// Point / direction in R^2 or R^3. The dimension travels with the value so
// that geometry code can stay dimension-generic.
struct Vec {
  int n = 0;
  std::array<double, 3> c{0.0, 0.0, 0.0};

  Vec() = default;
  Vec(double x, double y) : n(2), c{x, y, 0.0} {}
  Vec(double x, double y, double z) : n(3), c{x, y, z} {}

  static Vec zero(int dim) {
    Vec v;
    v.n = dim;
    return v;
  }

  double operator[](int i) const { return c[static_cast<size_t>(i)]; }
  double& operator[](int i) { return c[static_cast<size_t>(i)]; }

  Vec operator+(const Vec& o) const {
    assert(n == o.n);
    Vec r = *this;
    for (int i = 0; i < n; ++i) r.c[i] += o.c[i];
    return r;
  }
  Vec operator-(const Vec& o) const {
    assert(n == o.n);
    Vec r = *this;
    for (int i = 0; i < n; ++i) r.c[i] -= o.c[i];
    return r;
  }
  Vec operator*(double s) const {
    Vec r = *this;
    for (int i = 0; i < n; ++i) r.c[i] *= s;
    return r;
  }
  Vec operator-() const { return *this * -1.0; }

  double dot(const Vec& o) const {
    assert(n == o.n);
    double s = 0;
    for (int i = 0; i < n; ++i) s += c[i] * o.c[i];
    return s;
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }

  Vec normalized() const {
    double len = norm();
    assert(len > 0);
    return *this * (1.0 / len);
  }

  // 3D cross product.
  Vec cross(const Vec& o) const {
    assert(n == 3 && o.n == 3);
    return Vec(c[1] * o.c[2] - c[2] * o.c[1], c[2] * o.c[0] - c[0] * o.c[2],
               c[0] * o.c[1] - c[1] * o.c[0]);
  }

  // 2D scalar cross (z-component of the embedded cross product).
  double cross2(const Vec& o) const {
    assert(n == 2 && o.n == 2);
    return c[0] * o.c[1] - c[1] * o.c[0];
  }

  // 2D counterclockwise perpendicular.
  Vec perp() const {
    assert(n == 2);
    return Vec(-c[1], c[0]);
  }
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

inline double distance(const Vec& a, const Vec& b) { return (a - b).norm(); }

// Complex n-vector used for CGO frequencies rho and exponential arguments.
struct CVec {
  int n = 0;
  std::array<Complex, 3> c{};

  CVec() = default;
  CVec(Complex x, Complex y) : n(2), c{x, y, Complex(0)} {}
  CVec(Complex x, Complex y, Complex z) : n(3), c{x, y, z} {}

  static CVec from_parts(const Vec& re, const Vec& im) {
    assert(re.n == im.n);
    CVec v;
    v.n = re.n;
    for (int i = 0; i < re.n; ++i) v.c[i] = Complex(re[i], im[i]);
    return v;
  }

  Complex operator[](int i) const { return c[static_cast<size_t>(i)]; }
  Complex& operator[](int i) { return c[static_cast<size_t>(i)]; }

  CVec operator*(Complex s) const {
    CVec r = *this;
    for (int i = 0; i < n; ++i) r.c[i] *= s;
    return r;
  }
  CVec operator*(double s) const { return *this * Complex(s, 0); }

  // Bilinear dot product (no conjugation); the isotropy condition is
  // dot(*this) with itself equal to zero.
  Complex dot(const Vec& v) const {
    assert(n == v.n);
    Complex s = 0;
    for (int i = 0; i < n; ++i) s += c[i] * v[i];
    return s;
  }
  Complex dot(const CVec& v) const {
    assert(n == v.n);
    Complex s = 0;
    for (int i = 0; i < n; ++i) s += c[i] * v.c[i];
    return s;
  }

  double abs2() const {
    double s = 0;
    for (int i = 0; i < n; ++i) s += std::norm(c[i]);
    return s;
  }

  Vec real_part() const {
    Vec v = Vec::zero(n);
    for (int i = 0; i < n; ++i) v[i] = c[i].real();
    return v;
  }
  Vec imag_part() const {
    Vec v = Vec::zero(n);
    for (int i = 0; i < n; ++i) v[i] = c[i].imag();
    return v;
  }
};

// Axis-aligned bounding box.
struct Box {
  Vec lo, hi;

  int dim() const { return lo.n; }
  bool contains(const Vec& p, double tol = 0.0) const {
    for (int i = 0; i < lo.n; ++i)
      if (p[i] < lo[i] - tol || p[i] > hi[i] + tol) return false;
    return true;
  }
  Box inflated(double m) const {
    Box b = *this;
    for (int i = 0; i < lo.n; ++i) {
      b.lo[i] -= m;
      b.hi[i] += m;
    }
    return b;
  }
  static Box hull(const Box& a, const Box& b) {
    Box r = a;
    for (int i = 0; i < a.lo.n; ++i) {
      r.lo[i] = std::min(a.lo[i], b.lo[i]);
      r.hi[i] = std::max(a.hi[i], b.hi[i]);
    }
    return r;
  }
};

}  // namespace polyscat

#pragma once

// Independent quadrature oracle for int_C e^{rho.x} dx over polyhedral
// cones. Radial direction: composite Gauss-Legendre panels sized to the
// local decay/oscillation, truncated where the analytic tail bound is
// negligible. Angular direction: adaptive Simpson over the 2D aperture; in
// 3D, Duffy-mapped tensor Gauss-Legendre over the spherical section fanned
// from the centroid direction (a different decomposition than the
// production fan), with successive-order agreement as the error control.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "polyscat/geometry.hpp"
#include "polyscat/vec.hpp"

namespace polyscat::oracle {

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0);
  w.assign(n, 0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
      }
      double dp = n * (t * p0 - p1) / (t * t - 1);
      double dt = p0 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    double p0 = 1, p1 = 0;
    for (int j = 0; j < n; ++j) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
    }
    double dp = n * (t * p0 - p1) / (t * t - 1);
    x[i] = -t;
    x[n - 1 - i] = t;
    w[i] = w[n - 1 - i] = 2.0 / ((1 - t * t) * dp * dp);
  }
}

// int_0^inf e^{z r} r^{n-1} dr by marching GL panels whose length grows
// with r (the tail carries exponentially less weight); Re z < 0 required.
inline Complex radial_integral(Complex z, int n) {
  static thread_local std::vector<double> gx, gw;
  if (gx.empty()) gauss_legendre(16, gx, gw);
  const double decay = -z.real();
  if (decay <= 0) throw Error("radial integrand does not decay");
  const double osc = std::abs(z.imag());
  const double r_max = 40.0 / decay;
  double panel = std::min(M_PI / std::max(osc, 1e-30), 1.0 / decay);
  const double cap = std::min(2.5 * M_PI / std::max(osc, 1e-30), 8.0 / decay);

  Complex sum = 0;
  double r0 = 0;
  while (r0 < r_max) {
    double r1 = std::min(r0 + panel, r_max);
    double mid = 0.5 * (r0 + r1), half = 0.5 * (r1 - r0);
    for (int q = 0; q < 16; ++q) {
      double r = mid + half * gx[q];
      sum += half * gw[q] * std::exp(z * r) * (n == 2 ? r : r * r);
    }
    r0 = r1;
    panel = std::min(panel * 1.4, cap);
  }
  // Analytic tail bound: int_R^inf e^{-c r} r^{n-1} dr in closed form.
  const double c = decay, R = r_max;
  double tail = (n == 2) ? std::exp(-c * R) * (R / c + 1.0 / (c * c))
                         : std::exp(-c * R) *
                               (R * R / c + 2 * R / (c * c) + 2.0 / (c * c * c));
  if (!(tail < 1e-12 * (std::abs(sum) + 1e-300)))
    throw Error("radial truncation tail not negligible");
  return sum;
}

inline Complex adaptive_simpson(const std::function<Complex(double)>& f,
                                double a, double b, Complex fa, Complex fm,
                                Complex fb, double tol, int depth) {
  double m = 0.5 * (a + b);
  Complex fl = f(0.5 * (a + m)), fr = f(0.5 * (m + b));
  Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  Complex left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
  Complex right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
  double err = std::abs(left + right - whole);
  double noise = 1e-13 * (std::abs(left) + std::abs(right));
  if (depth <= 0 || err < 15 * tol || err < noise)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, fl, fm, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, fr, fb, tol / 2, depth - 1);
}

// Duffy-mapped tensor GL on the planar triangle (a, b, c), points
// clustered toward corner a: p(u, v) = a + u(b - a) + uv(c - b),
// jacobian 2*area*u.
inline Complex duffy_triangle(const Vec& a, const Vec& b, const Vec& c,
                              const std::function<Complex(const Vec&)>& f,
                              int order) {
  std::vector<double> gx, gw;
  gauss_legendre(order, gx, gw);
  double area2 = (b - a).cross(c - a).norm();  // 2*area
  Complex sum = 0;
  for (int i = 0; i < order; ++i) {
    double u = 0.5 * (gx[i] + 1), wu = 0.5 * gw[i];
    Vec pb = a + (b - a) * u;
    Vec step = (c - b) * u;
    for (int j = 0; j < order; ++j) {
      double v = 0.5 * (gx[j] + 1), wv = 0.5 * gw[j];
      sum += wu * wv * u * f(pb + step * v);
    }
  }
  return sum * area2;
}

}  // namespace detail

inline Complex cone_transform_quadrature(const Cone& cone, const CVec& rho,
                                         double rel_tol = 1e-10) {
  using namespace detail;
  const int n = cone.dim();
  for (const auto& w : cone.generators())
    if ((-rho.dot(w)).real() <= 0)
      throw NonConvergent("quadrature oracle: integral diverges");

  if (n == 2) {
    const Vec g0 = cone.generators()[0], g1 = cone.generators()[1];
    double span = std::acos(std::clamp(g0.dot(g1), -1.0, 1.0));
    double sign = g0.cross2(g1) >= 0 ? 1.0 : -1.0;
    auto dir = [&](double t) {
      double ang = std::atan2(g0[1], g0[0]) + sign * t * span;
      return Vec(std::cos(ang), std::sin(ang));
    };
    auto f = [&](double t) { return span * radial_integral(rho.dot(dir(t)), 2); };
    Complex fa = f(0.0), fm = f(0.5), fb = f(1.0);
    double scale = std::max({std::abs(fa), std::abs(fm), std::abs(fb)});
    double tol = rel_tol * std::max(scale, 1e-300);
    return adaptive_simpson(f, 0, 1, fa, fm, fb, tol, 36);
  }

  // 3D: spherical polygon of directions, fanned from the centroid. Solid
  // angle of a planar patch: dOmega = (p.nrm)/|p|^3 dA.
  const auto& gens = cone.generators();
  Vec centroid = Vec::zero(3);
  for (const auto& g : gens) centroid = centroid + g;
  centroid = centroid.normalized();

  auto f = [&](const Vec& p) {
    double len = p.norm();
    Vec theta = p * (1.0 / len);
    return radial_integral(rho.dot(theta), 3) / (len * len * len);
  };

  Complex total = 0;
  const int m = static_cast<int>(gens.size());
  for (int j = 0; j < m; ++j) {
    std::vector<Vec> corner = {centroid, gens[j], gens[(j + 1) % m]};
    Vec nrm = (corner[1] - corner[0]).cross(corner[2] - corner[0]);
    double nl = nrm.norm();
    if (nl < 1e-14) continue;  // centroid collinear with this edge
    double pn = std::abs((nrm * (1.0 / nl)).dot(corner[0]));
    auto g = [&, pn](const Vec& p) { return pn * f(p); };

    // Cluster the Duffy map at the corner where the integrand peaks.
    int peak = 0;
    double peak_val = -1;
    for (int q = 0; q < 3; ++q) {
      Vec probe = corner[q] * 0.94 + corner[(q + 1) % 3] * 0.03 +
                  corner[(q + 2) % 3] * 0.03;
      double val = std::abs(g(probe));
      if (val > peak_val) {
        peak_val = val;
        peak = q;
      }
    }
    std::swap(corner[0], corner[peak]);

    Complex prev = duffy_triangle(corner[0], corner[1], corner[2], g, 24);
    Complex cur = 0;
    bool converged = false;
    for (int order : {32, 44, 60, 80}) {
      cur = duffy_triangle(corner[0], corner[1], corner[2], g, order);
      if (std::abs(cur - prev) <=
          rel_tol * std::max({std::abs(cur), std::abs(total), 1e-300})) {
        converged = true;
        break;
      }
      prev = cur;
    }
    if (!converged) throw Error("quadrature oracle: angular rule stalled");
    total += cur;
  }
  return total;
}

}  // namespace polyscat::oracle

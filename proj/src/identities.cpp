#include "polyscat/identities.hpp"

#include <algorithm>
#include <cmath>

namespace polyscat {

FieldFn grid_field(const Grid& grid, std::vector<Complex> samples) {
  if (samples.size() != grid.size())
    throw InvalidInput("sample/grid size mismatch");
  return [grid, samples = std::move(samples)](const Vec& x) -> Complex {
    const int n = grid.n;
    int base[3] = {0, 0, 0};
    double frac[3] = {0, 0, 0};
    for (int d = 0; d < n; ++d) {
      double u = (x[d] + grid.R) / grid.h - 0.5;
      int i0 = static_cast<int>(std::floor(u));
      i0 = std::clamp(i0, 0, grid.counts[d] - 2);
      base[d] = i0;
      frac[d] = std::clamp(u - i0, 0.0, 1.0);
    }
    Complex acc = 0;
    const int zmax = n == 3 ? 1 : 0;
    for (int dz = 0; dz <= zmax; ++dz)
      for (int dy = 0; dy <= 1; ++dy)
        for (int dx = 0; dx <= 1; ++dx) {
          double w = (dx ? frac[0] : 1 - frac[0]) * (dy ? frac[1] : 1 - frac[1]);
          if (n == 3) w *= dz ? frac[2] : 1 - frac[2];
          acc += w * samples[grid.index(base[0] + dx, base[1] + dy,
                                        n == 3 ? base[2] + dz : 0)];
        }
    return acc;
  };
}

std::vector<Complex> harmonic_exponential(const CVec& rho,
                                          const std::vector<Vec>& points) {
  if (std::abs(rho.dot(rho)) > 1e-12 * rho.abs2())
    throw InvalidInput("rho is not isotropic (rho.rho != 0)");
  std::vector<Complex> out;
  out.reserve(points.size());
  for (const auto& x : points) out.push_back(std::exp(rho.dot(x)));
  return out;
}

namespace {

struct BoundarySample {
  Vec point;
  Vec normal;  // outward unit
  double weight;
};

// Planar-triangle map of a spherical patch: dsigma = r^2 (p.nrm)/|p|^3 dA.
void spherical_patch_samples(const Cone& cone, const Vec& apex, double radius,
                             double h_quad, std::vector<BoundarySample>& out) {
  const auto& gens = cone.generators();
  Vec centroid = Vec::zero(3);
  for (const auto& g : gens) centroid = centroid + g;
  centroid = centroid.normalized();
  const int m = static_cast<int>(gens.size());
  for (int j = 0; j < m; ++j) {
    Vec a = centroid, b = gens[j], c = gens[(j + 1) % m];
    Vec nrm = (b - a).cross(c - a);
    double nl = nrm.norm();
    if (nl < 1e-14) continue;
    nrm = nrm * (1.0 / nl);
    double pn = std::abs(nrm.dot(a));
    int div = std::max(2, static_cast<int>(std::ceil(radius / h_quad)));
    // Uniform barycentric subdivision, one sample per subtriangle centroid.
    for (int r = 0; r < div; ++r)
      for (int s = 0; r + s < div; ++s)
        for (int up = 0; up < 2; ++up) {
          if (up == 1 && r + s + 1 >= div) continue;
          double shift = up == 0 ? 1.0 / 3 : 2.0 / 3;
          double u = (r + shift) / div, v = (s + shift) / div;
          Vec p = a + (b - a) * u + (c - a) * v;
          double len = p.norm();
          Vec theta = p * (1.0 / len);
          double area = 0.5 * nl / (div * div);
          double dsigma = radius * radius * pn / (len * len * len) * area;
          out.push_back({apex + theta * radius, theta, dsigma});
        }
  }
}

std::vector<BoundarySample> sector_boundary(const SectorRegion& reg,
                                            double h_quad) {
  std::vector<BoundarySample> out;
  const Cone& cone = reg.cone;
  const Vec apex = cone.apex();
  const double r = reg.radius;

  if (cone.dim() == 2) {
    const Vec g0 = cone.generators()[0], g1 = cone.generators()[1];
    // Straight sides; outward normal points away from the cone interior.
    for (const Vec* g : {&g0, &g1}) {
      Vec nrm = g->perp();
      if (nrm.dot(cone.axis()) > 0) nrm = -nrm;
      int panels = std::max(2, static_cast<int>(std::ceil(r / h_quad)));
      for (int i = 0; i < panels; ++i) {
        double t = (i + 0.5) * r / panels;
        out.push_back({apex + *g * t, nrm, r / panels});
      }
    }
    // Arc from g0 to g1 through the interior.
    double span = std::acos(std::clamp(g0.dot(g1), -1.0, 1.0));
    double sign = g0.cross2(g1) >= 0 ? 1.0 : -1.0;
    double a0 = std::atan2(g0[1], g0[0]);
    int panels = std::max(4, static_cast<int>(std::ceil(span * r / h_quad)));
    for (int i = 0; i < panels; ++i) {
      double t = a0 + sign * (i + 0.5) * span / panels;
      Vec theta(std::cos(t), std::sin(t));
      out.push_back({apex + theta * r, theta, span * r / panels});
    }
    return out;
  }

  // 3D: one planar circular sector per boundary facet plus the cap.
  const auto& gens = cone.generators();
  const int m = static_cast<int>(gens.size());
  for (int j = 0; j < m; ++j) {
    const Vec& wa = gens[j];
    const Vec& wb = gens[(j + 1) % m];
    Vec nrm = wa.cross(wb);
    double nl = nrm.norm();
    if (nl < 1e-12) continue;
    nrm = nrm * (1.0 / nl);
    if (nrm.dot(cone.axis()) > 0) nrm = -nrm;  // outward
    // In-plane polar coordinates between wa and wb.
    Vec e2 = (wb - wa * wa.dot(wb)).normalized();
    double span = std::acos(std::clamp(wa.dot(wb), -1.0, 1.0));
    int ang = std::max(4, static_cast<int>(std::ceil(span * r / h_quad)));
    int rad = std::max(2, static_cast<int>(std::ceil(r / h_quad)));
    for (int ia = 0; ia < ang; ++ia)
      for (int ir = 0; ir < rad; ++ir) {
        double t = (ia + 0.5) * span / ang;
        double rr = (ir + 0.5) * r / rad;
        Vec dir = wa * std::cos(t) + e2 * std::sin(t);
        double weight = (span / ang) * (r / rad) * rr;
        out.push_back({apex + dir * rr, nrm, weight});
      }
  }
  spherical_patch_samples(cone, apex, r, h_quad, out);
  return out;
}

std::vector<BoundarySample> polytope_boundary(const Polytope& p, double h_quad) {
  std::vector<BoundarySample> out;
  if (p.dim() == 2) {
    for (const auto& f : p.facets()) {
      Vec a = p.vertices()[f.vertex_ids[0]];
      Vec b = p.vertices()[f.vertex_ids[1]];
      double len = distance(a, b);
      int panels = std::max(2, static_cast<int>(std::ceil(len / h_quad)));
      for (int i = 0; i < panels; ++i) {
        double t = (i + 0.5) / panels;
        out.push_back({a + (b - a) * t, f.normal, len / panels});
      }
    }
    return out;
  }
  for (const auto& f : p.facets()) {
    const auto& ring = f.vertex_ids;
    for (size_t t = 1; t + 1 < ring.size(); ++t) {
      Vec a = p.vertices()[ring[0]];
      Vec b = p.vertices()[ring[t]];
      Vec c = p.vertices()[ring[t + 1]];
      double area2 = (b - a).cross(c - a).norm();
      double edge = std::max({distance(a, b), distance(b, c), distance(a, c)});
      int div = std::max(2, static_cast<int>(std::ceil(edge / h_quad)));
      for (int r = 0; r < div; ++r)
        for (int s = 0; r + s < div; ++s)
          for (int up = 0; up < 2; ++up) {
            if (up == 1 && r + s + 1 >= div) continue;
            double shift = up == 0 ? 1.0 / 3 : 2.0 / 3;
            double u = (r + shift) / div, v = (s + shift) / div;
            out.push_back({a + (b - a) * u + (c - a) * v, f.normal,
                           0.5 * area2 / (div * div)});
          }
    }
  }
  return out;
}

bool region_contains(const Region& region, const Vec& x) {
  if (const auto* sec = std::get_if<SectorRegion>(&region)) {
    Vec rel = x - sec->cone.apex();
    return rel.norm() <= sec->radius &&
           sec->cone.contains_direction(rel, 1e-12);
  }
  return std::get<Polytope>(region).contains(x, 0.0);
}

Box region_bounds(const Region& region) {
  if (const auto* sec = std::get_if<SectorRegion>(&region)) {
    Vec lo = sec->cone.apex(), hi = sec->cone.apex();
    for (int d = 0; d < lo.n; ++d) {
      lo[d] -= sec->radius;
      hi[d] += sec->radius;
    }
    return {lo, hi};
  }
  return std::get<Polytope>(region).bounds();
}

int region_dim(const Region& region) {
  if (const auto* sec = std::get_if<SectorRegion>(&region))
    return sec->cone.dim();
  return std::get<Polytope>(region).dim();
}

}  // namespace

AlessandriniTerms alessandrini_residual(const Region& region, const FieldFn& q,
                                        const FieldFn& q_prime, const FieldFn& u,
                                        const FieldFn& u_prime, const FieldFn& u0,
                                        double h_quad) {
  if (h_quad <= 0) throw InvalidInput("quadrature step must be positive");
  if (const auto* sec = std::get_if<SectorRegion>(&region)) {
    if (sec->radius <= 0 || sec->cone.margin() <= 0)
      throw RegionNotLipschitzRepresentable(
          "sector needs a positive radius and a pointed cone");
  }

  const int n = region_dim(region);
  AlessandriniTerms terms;

  // Volume side, midpoint rule over the bounding lattice.
  Box bb = region_bounds(region);
  std::array<int, 3> counts{1, 1, 1};
  for (int d = 0; d < n; ++d)
    counts[d] =
        std::max(2, static_cast<int>(std::ceil((bb.hi[d] - bb.lo[d]) / h_quad)));
  double cell = 1;
  for (int d = 0; d < n; ++d) cell *= (bb.hi[d] - bb.lo[d]) / counts[d];
  Complex vol = 0;
  for (int kz = 0; kz < counts[2]; ++kz)
    for (int jy = 0; jy < counts[1]; ++jy)
      for (int ix = 0; ix < counts[0]; ++ix) {
        Vec x = Vec::zero(n);
        x[0] = bb.lo[0] + (ix + 0.5) * (bb.hi[0] - bb.lo[0]) / counts[0];
        x[1] = bb.lo[1] + (jy + 0.5) * (bb.hi[1] - bb.lo[1]) / counts[1];
        if (n == 3) x[2] = bb.lo[2] + (kz + 0.5) * (bb.hi[2] - bb.lo[2]) / counts[2];
        if (!region_contains(region, x)) continue;
        vol += (q(x) - q_prime(x)) * u_prime(x) * u0(x);
      }
  terms.volume_term = vol * cell;

  // Boundary side with centered normal differences.
  std::vector<BoundarySample> samples =
      std::holds_alternative<SectorRegion>(region)
          ? sector_boundary(std::get<SectorRegion>(region), h_quad)
          : polytope_boundary(std::get<Polytope>(region), h_quad);
  // Green's identity with the outward normal gives the boundary side as
  // int (u0 dn(u' - u) - (u' - u) dn u0); note the orientation of w.
  Complex bnd = 0;
  const double step = h_quad;
  for (const auto& s : samples) {
    Vec xp = s.point + s.normal * step;
    Vec xm = s.point - s.normal * step;
    Complex w = u_prime(s.point) - u(s.point);
    Complex dw = ((u_prime(xp) - u(xp)) - (u_prime(xm) - u(xm))) / (2 * step);
    Complex du0 = (u0(xp) - u0(xm)) / (2 * step);
    bnd += (u0(s.point) * dw - w * du0) * s.weight;
  }
  terms.boundary_term = bnd;
  terms.residual = std::abs(terms.volume_term - terms.boundary_term);
  return terms;
}

namespace {

// int_{B cap C} e^{s rho.(x - apex)} f(x) dx with radially graded panels.
Complex sector_integral(const Cone& cone, double b_radius, const CVec& srho,
                        const FieldFn& f) {
  static thread_local std::vector<double> gx, gw;
  if (gx.empty()) {
    // 12-point Gauss-Legendre.
    gx = {-0.9815606342467192, -0.9041172563704749, -0.7699026741943047,
          -0.5873179542866175, -0.3678314989981802, -0.1252334085114689,
          0.1252334085114689,  0.3678314989981802,  0.5873179542866175,
          0.7699026741943047,  0.9041172563704749,  0.9815606342467192};
    gw = {0.0471753363865118, 0.1069393259953184, 0.1600783285433462,
          0.2031674267230659, 0.2334925365383548, 0.2491470458134028,
          0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
          0.1600783285433462, 0.1069393259953184, 0.0471753363865118};
  }

  // Radial decay scale from the slowest generator.
  double decay = 1e300;
  for (const auto& w : cone.generators())
    decay = std::min(decay, (-srho.dot(w)).real());
  if (decay <= 0) throw NonConvergent("corner integral does not converge");

  std::vector<double> edges{0.0};
  double step = std::min(b_radius, 0.25 / std::max(decay, 1.0 / b_radius));
  while (edges.back() < b_radius) {
    edges.push_back(std::min(edges.back() + step, b_radius));
    step *= 1.5;
  }

  const Vec apex = cone.apex();
  auto radial = [&](const Vec& theta) {
    Complex z = srho.dot(theta);
    Complex acc = 0;
    const int npow = cone.dim() - 1;
    for (size_t e = 0; e + 1 < edges.size(); ++e) {
      double mid = 0.5 * (edges[e] + edges[e + 1]);
      double half = 0.5 * (edges[e + 1] - edges[e]);
      for (size_t qq = 0; qq < gx.size(); ++qq) {
        double r = mid + half * gx[qq];
        acc += half * gw[qq] * std::exp(z * r) * (npow == 1 ? r : r * r) *
               f(apex + theta * r);
      }
    }
    return acc;
  };

  if (cone.dim() == 2) {
    const Vec g0 = cone.generators()[0], g1 = cone.generators()[1];
    double span = std::acos(std::clamp(g0.dot(g1), -1.0, 1.0));
    double sign = g0.cross2(g1) >= 0 ? 1.0 : -1.0;
    double a0 = std::atan2(g0[1], g0[0]);
    const int panels = 24;
    Complex acc = 0;
    for (int i = 0; i < panels; ++i) {
      double mid = a0 + sign * (i + 0.5) * span / panels;
      double half = 0.5 * span / panels;
      for (size_t qq = 0; qq < gx.size(); ++qq) {
        double t = mid + sign * half * gx[qq];
        acc += half * gw[qq] * radial(Vec(std::cos(t), std::sin(t)));
      }
    }
    return acc;
  }

  // 3D: Duffy tensor rule over the centroid fan of the section polygon.
  const auto& gens = cone.generators();
  Vec centroid = Vec::zero(3);
  for (const auto& g : gens) centroid = centroid + g;
  centroid = centroid.normalized();
  const int m = static_cast<int>(gens.size());
  Complex acc = 0;
  for (int j = 0; j < m; ++j) {
    Vec a = centroid, b = gens[j], c = gens[(j + 1) % m];
    Vec nrm = (b - a).cross(c - a);
    double nl = nrm.norm();
    if (nl < 1e-14) continue;
    double pn = std::abs((nrm * (1.0 / nl)).dot(a));
    for (size_t iu = 0; iu < gx.size(); ++iu) {
      double u = 0.5 * (gx[iu] + 1), wu = 0.5 * gw[iu];
      Vec pb = a + (b - a) * u;
      Vec stepv = (c - b) * u;
      for (size_t iv = 0; iv < gx.size(); ++iv) {
        double v = 0.5 * (gx[iv] + 1), wv = 0.5 * gw[iv];
        Vec p = pb + stepv * v;
        double len = p.norm();
        Vec theta = p * (1.0 / len);
        acc += wu * wv * u * nl * pn / (len * len * len) * radial(theta);
      }
    }
  }
  return acc;
}

}  // namespace

CornerLimitResult corner_limit(const Cone& cone, double b_radius,
                               const FieldFn& delta_q, const FieldFn& u_prime,
                               const CGOVector& rho_hat,
                               const std::vector<double>& s_list) {
  if (s_list.size() < 3)
    throw InvalidInput("corner limit needs at least three scales");
  for (size_t i = 0; i + 1 < s_list.size(); ++i)
    if (std::abs(s_list[i + 1] / s_list[i] - 2.0) > 1e-12)
      throw InvalidInput("scale sweep must be geometric with ratio 2");
  if (b_radius <= 0) throw InvalidInput("ball radius must be positive");

  CornerLimitResult result;
  auto integrand = [&](const Vec& x) { return delta_q(x) * u_prime(x); };
  for (double s : s_list) {
    Complex numer = sector_integral(cone, b_radius, rho_hat.rho * s, integrand);
    Complex denom = fan_transform(cone, rho_hat.rho * s);
    result.sweep.emplace_back(s, numer / denom);
  }

  double scale = 0;
  for (const auto& [s, j] : result.sweep) scale = std::max(scale, std::abs(j));
  std::vector<Complex> estimates;
  for (size_t i = 0; i + 2 < result.sweep.size(); ++i) {
    Complex j1 = result.sweep[i].second, j2 = result.sweep[i + 1].second,
            j4 = result.sweep[i + 2].second;
    Complex denom = (j4 - j2) - (j2 - j1);
    estimates.push_back(std::abs(denom) < 1e-12 * std::max(scale, 1e-300)
                            ? j4
                            : j4 - (j4 - j2) * (j4 - j2) / denom);
  }
  result.limit = estimates.back();
  if (estimates.size() >= 2) {
    double ref = std::max({std::abs(result.limit), scale * 1e-9, 1e-300});
    result.instability =
        std::abs(estimates.back() - estimates[estimates.size() - 2]) / ref;
    if (result.instability > 0.10)
      throw ExtrapolationUnstable("successive corner-limit estimates disagree");
  }
  return result;
}

NodalReport nodal_check(const FieldSolution& sol) {
  NodalReport report;
  report.min_abs = std::numeric_limits<double>::infinity();
  for (size_t q = 0; q < sol.total.size(); ++q) {
    double a = std::abs(sol.total[q]);
    if (a < report.min_abs) {
      report.min_abs = a;
      report.argmin = sol.grid.point(q);
    }
  }
  return report;
}

double scattered_norm_ratio(const FieldSolution& sol, const Potential& v) {
  const double k = sol.incident.k;
  double denom = k * k * v.sup_norm() * std::sqrt(v.support_volume());
  if (denom == 0.0)
    throw ZeroDenominator("scattered-norm ratio undefined for V = 0");
  return h2_norm(sol.scattered, sol.grid) / denom;
}

}  // namespace polyscat

#include "polyscat/conelab.hpp"

#include <cmath>

namespace polyscat {

namespace {

double generator_determinant(const std::vector<Vec>& gens) {
  if (gens[0].n == 2) return std::abs(gens[0].cross2(gens[1]));
  return std::abs(gens[0].cross(gens[1]).dot(gens[2]));
}

}  // namespace

Complex simplex_cone_transform(const std::vector<Vec>& gens, const CVec& rho) {
  const int n = rho.n;
  if (static_cast<int>(gens.size()) != n)
    throw InvalidInput("simplex cone needs exactly n generators");
  Complex denom = 1.0;
  for (const auto& w : gens) {
    Complex zw = -rho.dot(w);
    if (zw.real() <= 0)
      throw NonConvergent("Re(-rho.w) <= 0: Laplace integral diverges");
    denom *= zw;
  }
  double det = generator_determinant(gens);
  if (det <= kGeomTol) throw InvalidInput("degenerate simplex cone");
  return det / denom;
}

Complex fan_transform(const Cone& cone, const CVec& rho) {
  const auto& w = cone.generators();
  if (cone.dim() == 2) return simplex_cone_transform({w[0], w[1]}, rho);
  Complex sum = 0;
  for (size_t j = 1; j + 1 < w.size(); ++j)
    sum += simplex_cone_transform({w[0], w[j], w[j + 1]}, rho);
  return sum;
}

CGOVector choose_rho(const Cone& cone, double eps) {
  if (cone.dim() != 3) throw InvalidInput("choose_rho is the 3D construction");
  if (eps <= 0) throw InvalidInput("eps must be positive");
  const auto& gens = cone.generators();
  const Vec w = gens[0];

  // Project the remaining generators into the plane w.x = 0; the best z is
  // the direction of the minimum-norm point of their convex hull.
  std::vector<Vec> proj;
  for (size_t j = 1; j < gens.size(); ++j)
    proj.push_back(gens[j] - w * gens[j].dot(w));
  Vec p = min_norm_point(proj);
  if (p.norm() <= kGeomTol)
    throw NoSeparatingVector(
        "no unit z with z.w = 0 and z.w_j > 0: root edge is not extreme");
  Vec z = p.normalized();

  double margin = 1.0;
  for (size_t j = 1; j < gens.size(); ++j)
    margin = std::min(margin, z.dot(gens[j]));

  Vec r_eps = (z + w * eps).normalized();
  Vec i_dir = z.cross(w).normalized();

  CGOVector out;
  out.rho = CVec::from_parts(-r_eps, -i_dir);
  out.has_construction = true;
  out.w = w;
  out.z = z;
  out.i_dir = i_dir;
  out.r_eps = r_eps;
  out.eps = eps;
  out.z_margin = margin;
  return out;
}

CGOVector interior_rho(const Cone& cone) {
  Vec a = cone.axis();
  CGOVector out;
  if (cone.dim() == 2) {
    out.rho = CVec::from_parts(-a, -a.perp());
  } else {
    Vec seed = std::abs(a[0]) < 0.9 ? Vec(1, 0, 0) : Vec(0, 1, 0);
    Vec b = (seed - a * seed.dot(a)).normalized();
    out.rho = CVec::from_parts(-a, -b);
  }
  return out;
}

SplitTransform split_transform(const Cone& cone, const CVec& rho) {
  if (cone.dim() != 3) throw InvalidInput("split_transform needs a 3D cone");
  const auto& w = cone.generators();
  const size_t m = w.size();
  SplitTransform out;
  out.c1_part = simplex_cone_transform({w[0], w[1], w[m - 1]}, rho);
  out.rest_part = 0;
  for (size_t j = 2; j + 1 < m; ++j)
    out.rest_part += simplex_cone_transform({w[1], w[j], w[j + 1]}, rho);
  return out;
}

namespace {

void add_certification_rows(const Cone& cone, const CGOVector& rho_hat,
                            double eps, const std::vector<double>& s_list,
                            NonvanishingReport& report) {
  const double dim = static_cast<double>(cone.dim());
  for (double s : s_list) {
    CertificationRow row;
    row.eps = eps;
    row.s = s;
    row.transform = fan_transform(cone, rho_hat.rho * s);
    row.scaled_abs = std::pow(s, dim) * std::abs(row.transform);
    if (cone.dim() == 3 && cone.generators().size() > 3) {
      SplitTransform split = split_transform(cone, rho_hat.rho * s);
      row.c1_abs = std::abs(split.c1_part);
      row.rest_abs = std::abs(split.rest_part);
    }
    report.rows.push_back(row);
  }
}

void finish_report(NonvanishingReport& report) {
  report.min_scaled = report.rows.front().scaled_abs;
  for (const auto& row : report.rows)
    report.min_scaled = std::min(report.min_scaled, row.scaled_abs);
}

}  // namespace

NonvanishingReport certify_nonvanishing(const Cone& cone,
                                        const std::vector<double>& eps_list,
                                        const std::vector<double>& s_list) {
  if (s_list.empty()) throw InvalidInput("empty scale sweep");
  NonvanishingReport report;
  report.dim = cone.dim();
  if (cone.dim() == 2) {
    add_certification_rows(cone, interior_rho(cone), 0.0, s_list, report);
  } else {
    if (eps_list.empty()) throw InvalidInput("3D certification needs eps values");
    for (double eps : eps_list)
      add_certification_rows(cone, choose_rho(cone, eps), eps, s_list, report);
  }
  finish_report(report);
  return report;
}

NonvanishingReport certify_nonvanishing(const Cone& cone,
                                        const CGOVector& rho_hat,
                                        const std::vector<double>& s_list) {
  if (s_list.empty()) throw InvalidInput("empty scale sweep");
  NonvanishingReport report;
  report.dim = cone.dim();
  add_certification_rows(cone, rho_hat, rho_hat.eps, s_list, report);
  finish_report(report);
  return report;
}

}  // namespace polyscat

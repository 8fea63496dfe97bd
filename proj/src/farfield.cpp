#include "polyscat/farfield.hpp"

#include <cmath>

#include "polyscat/errors.hpp"

namespace polyscat {

std::vector<Vec> sphere_directions(int n, int count) {
  if (count < 1) throw InvalidInput("need at least one direction");
  std::vector<Vec> dirs;
  dirs.reserve(count);
  if (n == 2) {
    for (int i = 0; i < count; ++i) {
      double t = 2 * M_PI * i / count;
      dirs.emplace_back(std::cos(t), std::sin(t));
    }
    return dirs;
  }
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    double z = 1.0 - (2.0 * i + 1.0) / count;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = golden * i;
    dirs.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return dirs;
}

FarFieldPattern far_field(const FieldSolution& sol, const std::vector<Vec>& dirs) {
  const Grid& g = sol.grid;
  const double k = sol.incident.k;
  Complex cn = g.n == 3 ? Complex(1.0 / (4 * M_PI), 0)
                        : std::exp(Complex(0, M_PI / 4)) / std::sqrt(8 * M_PI * k);
  const Complex scale = cn * k * k * g.cell_volume();

  FarFieldPattern out;
  out.n = g.n;
  out.k = k;
  out.incident_direction = sol.incident.direction;
  out.directions = dirs;
  out.values.assign(dirs.size(), Complex(0));

  // Skip the empty exterior: V u vanishes there.
  std::vector<size_t> active;
  active.reserve(g.size());
  for (size_t q = 0; q < g.size(); ++q)
    if (sol.vsamples[q] != Complex(0.0)) active.push_back(q);

  for (size_t d = 0; d < dirs.size(); ++d) {
    const Vec& xhat = dirs[d];
    Complex acc = 0;
    for (size_t q : active) {
      Vec y = g.point(q);
      acc += std::exp(Complex(0, -k * xhat.dot(y))) * sol.vsamples[q] *
             sol.total[q];
    }
    out.values[d] = scale * acc;
  }
  return out;
}

double pattern_norm(const FarFieldPattern& a) {
  double s = 0;
  for (const auto& v : a.values) s += std::norm(v);
  return std::sqrt(s / static_cast<double>(a.values.size()));
}

double far_field_distance(const FarFieldPattern& a, const FarFieldPattern& b) {
  if (a.n != b.n || a.k != b.k || a.directions.size() != b.directions.size())
    throw DirectionMismatch("patterns sampled on different sets");
  for (size_t i = 0; i < a.directions.size(); ++i)
    if (distance(a.directions[i], b.directions[i]) > 1e-12)
      throw DirectionMismatch("patterns sampled on different sets");
  double num = 0, den_a = 0, den_b = 0;
  for (size_t i = 0; i < a.values.size(); ++i) {
    num += std::norm(a.values[i] - b.values[i]);
    den_a += std::norm(a.values[i]);
    den_b += std::norm(b.values[i]);
  }
  if (num == 0.0) return 0.0;
  return std::sqrt(num) / (std::sqrt(den_a) + std::sqrt(den_b));
}

}  // namespace polyscat

#include "polyscat/media.hpp"

#include <algorithm>
#include <cmath>

#include "polyscat/forward.hpp"

namespace polyscat {

namespace {

double boundary_distance(const Polytope& p, const Vec& x) {
  return p.contains(x) ? std::max(p.depth(x), 0.0) : p.distance(x);
}

}  // namespace

PiecewiseConstantPotential::PiecewiseConstantPotential(CellPartition structure,
                                                       std::vector<Complex> values)
    : structure_(std::move(structure)), values_(std::move(values)) {
  const auto& part = std::get<CellPartition>(structure_);
  if (part.cells.size() != values_.size())
    throw InvalidInput("one value per cell required");
  for (size_t j = 0; j < values_.size(); ++j)
    if (!part.cells[j] && values_[j] != 0.0)
      throw InvalidInput("empty cells must carry the value 0");
}

PiecewiseConstantPotential::PiecewiseConstantPotential(NestedFamily structure,
                                                       std::vector<Complex> values)
    : structure_(std::move(structure)), values_(std::move(values)) {
  const auto& fam = std::get<NestedFamily>(structure_);
  if (fam.shells.size() != values_.size())
    throw InvalidInput("one value per shell required");
  if (values_.empty() || values_[0] == 0.0)
    throw InvalidInput("nested potentials need V_1 != 0");
  for (size_t j = 0; j + 1 < values_.size(); ++j)
    if (fam.shells[j + 1] && values_[j + 1] == values_[j])
      throw InvalidInput("nested potentials need V_{j+1} != V_j");
}

int PiecewiseConstantPotential::dim() const {
  return std::visit([](const auto& s) { return s.dim(); }, structure_);
}

Complex PiecewiseConstantPotential::value_at(const Vec& x) const {
  if (const auto* part = std::get_if<CellPartition>(&structure_)) {
    for (size_t j = 0; j < part->cells.size(); ++j)
      if (part->cells[j] && part->cells[j]->contains(x, 0.0)) return values_[j];
    return 0.0;
  }
  const auto& fam = std::get<NestedFamily>(structure_);
  Complex val = 0.0;
  for (size_t j = 0; j < fam.shells.size(); ++j)
    if (fam.shells[j] && fam.shells[j]->contains(x, 0.0)) val = values_[j];
  return val;  // value of the innermost shell containing x
}

double PiecewiseConstantPotential::interface_distance(const Vec& x) const {
  double d = std::numeric_limits<double>::infinity();
  auto scan = [&](const std::vector<std::optional<Polytope>>& polys) {
    for (const auto& p : polys)
      if (p) d = std::min(d, boundary_distance(*p, x));
  };
  if (const auto* part = std::get_if<CellPartition>(&structure_))
    scan(part->cells);
  else
    scan(std::get<NestedFamily>(structure_).shells);
  return d;
}

Box PiecewiseConstantPotential::bounds() const {
  return std::visit([](const auto& s) { return s.bounds(); }, structure_);
}

double PiecewiseConstantPotential::sup_norm() const {
  double m = 0;
  auto nonempty = [&](size_t j) {
    if (const auto* part = std::get_if<CellPartition>(&structure_))
      return static_cast<bool>(part->cells[j]);
    return static_cast<bool>(std::get<NestedFamily>(structure_).shells[j]);
  };
  for (size_t j = 0; j < values_.size(); ++j)
    if (nonempty(j)) m = std::max(m, std::abs(values_[j]));
  return m;
}

double PiecewiseConstantPotential::support_volume() const {
  double vol = 0;
  if (const auto* part = std::get_if<CellPartition>(&structure_)) {
    for (size_t j = 0; j < part->cells.size(); ++j)
      if (part->cells[j] && values_[j] != 0.0) vol += part->cells[j]->volume();
    return vol;
  }
  const auto& fam = std::get<NestedFamily>(structure_);
  return fam.shells.empty() || !fam.shells[0] ? 0.0 : fam.shells[0]->volume();
}

std::vector<Vec> PiecewiseConstantPotential::structure_vertices() const {
  std::vector<Vec> out;
  auto scan = [&](const std::vector<std::optional<Polytope>>& polys) {
    for (const auto& p : polys)
      if (p)
        for (const auto& v : p->vertices()) out.push_back(v);
  };
  if (const auto* part = std::get_if<CellPartition>(&structure_))
    scan(part->cells);
  else
    scan(std::get<NestedFamily>(structure_).shells);
  return out;
}

PiecewiseConstantPotential PiecewiseConstantPotential::with_values(
    std::vector<Complex> values) const {
  if (const auto* part = std::get_if<CellPartition>(&structure_))
    return PiecewiseConstantPotential(*part, std::move(values));
  return PiecewiseConstantPotential(std::get<NestedFamily>(structure_),
                                    std::move(values));
}

AdmissiblePotential::AdmissiblePotential(Polytope cell, Sampler phi, double alpha)
    : cell_(std::move(cell)), phi_(std::move(phi)), alpha_(alpha) {
  if (cell_.dim() == 2 ? alpha_ <= 0 : alpha_ <= 0.25)
    throw InvalidInput("Hoelder exponent must exceed 0 (2D) / 1/4 (3D)");
  for (const auto& v : cell_.vertices())
    if (std::abs(phi_(v)) == 0.0)
      throw InvalidInput("phi must not vanish at any vertex of the cell");
}

int AdmissiblePotential::dim() const { return cell_.dim(); }

Complex AdmissiblePotential::value_at(const Vec& x) const {
  return cell_.contains(x, 0.0) ? phi_(x) : Complex(0.0);
}

double AdmissiblePotential::interface_distance(const Vec& x) const {
  return boundary_distance(cell_, x);
}

Box AdmissiblePotential::bounds() const { return cell_.bounds(); }

double AdmissiblePotential::sup_norm() const {
  Box b = cell_.bounds();
  const int n = cell_.dim();
  const int per_axis = 64;
  double m = 0;
  std::array<int, 3> counts{per_axis, per_axis, n == 3 ? per_axis : 1};
  for (int k = 0; k < counts[2]; ++k)
    for (int j = 0; j < counts[1]; ++j)
      for (int i = 0; i < counts[0]; ++i) {
        Vec x = Vec::zero(n);
        x[0] = b.lo[0] + (i + 0.5) * (b.hi[0] - b.lo[0]) / counts[0];
        x[1] = b.lo[1] + (j + 0.5) * (b.hi[1] - b.lo[1]) / counts[1];
        if (n == 3) x[2] = b.lo[2] + (k + 0.5) * (b.hi[2] - b.lo[2]) / counts[2];
        if (cell_.contains(x, 0.0)) m = std::max(m, std::abs(phi_(x)));
      }
  for (const auto& v : cell_.vertices()) m = std::max(m, std::abs(phi_(v)));
  return m;
}

BallPotential::BallPotential(Vec center, double radius, Complex value)
    : center_(center), radius_(radius), value_(value) {
  if (radius_ <= 0) throw InvalidInput("ball radius must be positive");
}

Complex BallPotential::value_at(const Vec& x) const {
  return distance(x, center_) < radius_ ? value_ : Complex(0.0);
}

double BallPotential::interface_distance(const Vec& x) const {
  return std::abs(distance(x, center_) - radius_);
}

double BallPotential::support_volume() const {
  return center_.n == 2 ? M_PI * radius_ * radius_
                        : 4.0 / 3.0 * M_PI * radius_ * radius_ * radius_;
}

Box BallPotential::bounds() const {
  Vec lo = center_, hi = center_;
  for (int i = 0; i < center_.n; ++i) {
    lo[i] -= radius_;
    hi[i] += radius_;
  }
  return {lo, hi};
}

std::vector<Complex> rasterize(const Potential& v, const Grid& grid) {
  if (v.dim() != grid.n) throw InvalidInput("potential/grid dimension mismatch");
  Box support = v.bounds();
  Box domain = grid.box();
  for (int i = 0; i < grid.n; ++i)
    if (support.lo[i] <= domain.lo[i] || support.hi[i] >= domain.hi[i])
      throw SupportOutsideGrid("potential support touches the grid boundary");

  const double h = grid.h;
  const int n = grid.n;
  const double cut_radius = 0.5 * h * std::sqrt(static_cast<double>(n));
  const int sub = 4;  // 4^n subsamples on cut cells

  std::vector<Complex> out(grid.size());
  const size_t total = grid.size();
  for (size_t flat = 0; flat < total; ++flat) {
    Vec x = grid.point(flat);
    if (v.interface_distance(x) > cut_radius) {
      out[flat] = v.value_at(x);
      continue;
    }
    Complex acc = 0;
    if (n == 2) {
      for (int a = 0; a < sub; ++a)
        for (int b = 0; b < sub; ++b) {
          Vec y = x;
          y[0] += ((a + 0.5) / sub - 0.5) * h;
          y[1] += ((b + 0.5) / sub - 0.5) * h;
          acc += v.value_at(y);
        }
      out[flat] = acc / static_cast<double>(sub * sub);
    } else {
      for (int a = 0; a < sub; ++a)
        for (int b = 0; b < sub; ++b)
          for (int c = 0; c < sub; ++c) {
            Vec y = x;
            y[0] += ((a + 0.5) / sub - 0.5) * h;
            y[1] += ((b + 0.5) / sub - 0.5) * h;
            y[2] += ((c + 0.5) / sub - 0.5) * h;
            acc += v.value_at(y);
          }
      out[flat] = acc / static_cast<double>(sub * sub * sub);
    }
  }
  return out;
}

double sup_norm(const Potential& v) { return v.sup_norm(); }

double contrast_product(const Potential& v, double k) {
  return k * k * v.sup_norm();
}

}  // namespace polyscat

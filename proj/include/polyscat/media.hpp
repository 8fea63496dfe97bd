#pragma once

#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "polyscat/geometry.hpp"
#include "polyscat/vec.hpp"

namespace polyscat {

struct Grid;  // forward.hpp

// Pointwise complex contrast with bounded support. Rasterization and the
// forward solver only need point evaluation, the distance to the nearest
// material interface (to detect cut cells) and a support box.
class Potential {
 public:
  virtual ~Potential() = default;
  virtual int dim() const = 0;
  virtual Complex value_at(const Vec& x) const = 0;
  virtual double interface_distance(const Vec& x) const = 0;
  virtual Box bounds() const = 0;
  virtual double sup_norm() const = 0;
  // Volume of Omega, the interior of the support union.
  virtual double support_volume() const = 0;
};

// V = sum_j V_j chi_{Sigma_j} over a cell partition, or the nested form
// where V takes value V_j on D_j \ D_{j+1}.
class PiecewiseConstantPotential : public Potential {
 public:
  PiecewiseConstantPotential(CellPartition structure, std::vector<Complex> values);
  PiecewiseConstantPotential(NestedFamily structure, std::vector<Complex> values);

  int dim() const override;
  Complex value_at(const Vec& x) const override;
  double interface_distance(const Vec& x) const override;
  Box bounds() const override;
  double sup_norm() const override;
  double support_volume() const override;

  const std::vector<Complex>& values() const { return values_; }
  bool is_nested() const { return std::holds_alternative<NestedFamily>(structure_); }
  const CellPartition& partition() const { return std::get<CellPartition>(structure_); }
  const NestedFamily& family() const { return std::get<NestedFamily>(structure_); }

  // All polytope vertices of the structure (cells or shells).
  std::vector<Vec> structure_vertices() const;

  PiecewiseConstantPotential with_values(std::vector<Complex> values) const;

 private:
  std::variant<CellPartition, NestedFamily> structure_;
  std::vector<Complex> values_;
};

// V = chi_P phi with phi Hoelder near the vertices and nonzero there.
class AdmissiblePotential : public Potential {
 public:
  using Sampler = std::function<Complex(const Vec&)>;

  // alpha > 0 in 2D and > 1/4 in 3D; phi must not vanish at any vertex.
  AdmissiblePotential(Polytope cell, Sampler phi, double alpha);

  int dim() const override;
  Complex value_at(const Vec& x) const override;
  double interface_distance(const Vec& x) const override;
  Box bounds() const override;
  // Maximum of |phi| over a dense lattice inside the cell.
  double sup_norm() const override;
  double support_volume() const override { return cell_.volume(); }

  const Polytope& cell() const { return cell_; }
  double alpha() const { return alpha_; }

 private:
  Polytope cell_;
  Sampler phi_;
  double alpha_;
};

// Constant value on a ball / disc; the analytic shape used by oracles.
class BallPotential : public Potential {
 public:
  BallPotential(Vec center, double radius, Complex value);

  int dim() const override { return center_.n; }
  Complex value_at(const Vec& x) const override;
  double interface_distance(const Vec& x) const override;
  Box bounds() const override;
  double sup_norm() const override { return std::abs(value_); }
  double support_volume() const override;

  double radius() const { return radius_; }
  const Vec& center() const { return center_; }
  Complex value() const { return value_; }

 private:
  Vec center_;
  double radius_;
  Complex value_;
};

// Samples V at the grid nodes: plain point values away from material
// interfaces, 4^n-subsample averages on cut cells, zero outside.
// Throws SupportOutsideGrid if the support is not strictly inside the box.
std::vector<Complex> rasterize(const Potential& v, const Grid& grid);

double sup_norm(const Potential& v);

// k^2 ||V||_inf, the smallness parameter of the contraction regime.
double contrast_product(const Potential& v, double k);

}  // namespace polyscat

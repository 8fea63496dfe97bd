#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "polyscat/forward.hpp"
#include "polyscat/media.hpp"

using namespace polyscat;

namespace {

PiecewiseConstantPotential square_potential(Complex value, double lo = -0.5,
                                            double hi = 0.5) {
  CellPartition part;
  part.cells.push_back(Polytope::axis_box(Vec(lo, lo), Vec(hi, hi)));
  part.d0 = 0.1;
  return PiecewiseConstantPotential(part, {value});
}

}  // namespace

TEST_CASE("rasterize aligned unit square: interior 1, exterior 0") {
  auto v = square_potential(1.0);
  Grid grid = Grid::cube(2, 1.0, 16);  // h = 0.125, edges on cell boundaries
  auto samples = rasterize(v, grid);
  for (size_t q = 0; q < samples.size(); ++q) {
    Vec x = grid.point(q);
    double m = std::max(std::abs(x[0]), std::abs(x[1]));
    if (m < 0.5) CHECK(samples[q] == Complex(1.0));
    if (m > 0.5) CHECK(samples[q] == Complex(0.0));
  }
}

TEST_CASE("rasterize zero potential") {
  auto v = square_potential(0.0);
  Grid grid = Grid::cube(2, 1.0, 32);
  for (const auto& s : rasterize(v, grid)) CHECK(s == Complex(0.0));
}

TEST_CASE("rasterized ball volume converges at first order") {
  for (int n = 2; n <= 3; ++n) {
    BallPotential ball(Vec::zero(n), 0.6, 1.0);
    double exact = n == 2 ? M_PI * 0.36 : 4.0 / 3.0 * M_PI * 0.216;
    double prev_err = 0;
    for (int N : {32, 64}) {
      Grid grid = Grid::cube(n, 1.0, N);
      auto samples = rasterize(ball, grid);
      Complex sum = 0;
      for (const auto& s : samples) sum += s;
      double vol = (sum * grid.cell_volume()).real();
      double err = std::abs(vol - exact) / exact;
      CHECK(err < 2.0 * grid.h);
      if (prev_err > 0) CHECK(err < prev_err);
      prev_err = err;
    }
  }
}

TEST_CASE("piecewise values recovered exactly away from boundaries") {
  CellPartition part;
  part.cells.push_back(Polytope::axis_box(Vec(-0.8, -0.8), Vec(-0.1, 0.8)));
  part.cells.push_back(Polytope::axis_box(Vec(0.1, -0.8), Vec(0.8, 0.8)));
  part.d0 = 0.05;
  PiecewiseConstantPotential v(part, {Complex(2, 1), Complex(-1, 0.5)});
  Grid grid = Grid::cube(2, 1.0, 64);
  auto samples = rasterize(v, grid);
  for (size_t q = 0; q < samples.size(); ++q) {
    Vec x = grid.point(q);
    if (v.interface_distance(x) < grid.h) continue;
    CHECK(samples[q] == v.value_at(x));
  }
}

TEST_CASE("rasterization L1 differences shrink at first order") {
  BallPotential ball(Vec(0.05, -0.1), 0.55, Complex(1, 0.5));
  double l1_prev = 0;
  for (int level = 0; level < 3; ++level) {
    int nc = 16 << level;
    Grid coarse = Grid::cube(2, 1.0, nc);
    Grid fine = Grid::cube(2, 1.0, 2 * nc);
    auto rc = rasterize(ball, coarse);
    auto rf = rasterize(ball, fine);
    double l1 = 0;
    for (int j = 0; j < fine.counts[1]; ++j)
      for (int i = 0; i < fine.counts[0]; ++i)
        l1 += std::abs(rf[fine.index(i, j)] - rc[coarse.index(i / 2, j / 2)]) *
              fine.cell_volume();
    if (l1_prev > 0) CHECK(l1 < 0.65 * l1_prev);
    l1_prev = l1;
  }
}

TEST_CASE("support must stay inside the grid") {
  auto v = square_potential(1.0, -1.0, 1.0);
  Grid grid = Grid::cube(2, 1.0, 32);
  CHECK_THROWS_AS(rasterize(v, grid), SupportOutsideGrid);
}

TEST_CASE("sup_norm of a value list") {
  CellPartition part;
  part.cells.push_back(Polytope::axis_box(Vec(0, 0), Vec(1, 1)));
  part.cells.push_back(Polytope::axis_box(Vec(2, 0), Vec(3, 1)));
  part.cells.push_back(std::nullopt);
  part.d0 = 0.1;
  PiecewiseConstantPotential v(part, {Complex(1, 0), Complex(0, -2), 0.0});
  CHECK(sup_norm(v) == doctest::Approx(2.0));
  CHECK(contrast_product(v, 3.0) == doctest::Approx(18.0));

  PiecewiseConstantPotential zero = square_potential(0.0);
  CHECK(sup_norm(zero) == 0.0);
}

TEST_CASE("sampled-phi sup norm matches a dense oracle") {
  Polytope cell = Polytope::axis_box(Vec(0, 0), Vec(1, 1));
  auto phi = [](const Vec& x) { return Complex(2.0 + std::sqrt(x.norm()), 0.0); };
  AdmissiblePotential v(cell, phi, 0.5);

  double dense = 0;
  const int n_dense = 400;
  for (int j = 0; j < n_dense; ++j)
    for (int i = 0; i < n_dense; ++i) {
      Vec x((i + 0.5) / n_dense, (j + 0.5) / n_dense);
      dense = std::max(dense, std::abs(phi(x)));
    }
  CHECK(std::abs(v.sup_norm() - dense) < 1e-3);
  CHECK(v.sup_norm() == doctest::Approx(2.0 + std::pow(2.0, 0.25)).epsilon(1e-6));
}

TEST_CASE("admissible potential invariants") {
  Polytope cell = Polytope::axis_box(Vec(0, 0), Vec(1, 1));
  auto ok = [](const Vec&) { return Complex(1.0); };
  CHECK_THROWS_AS(AdmissiblePotential(cell, ok, 0.0), InvalidInput);

  Polytope cube = Polytope::axis_box(Vec(0, 0, 0), Vec(1, 1, 1));
  CHECK_THROWS_AS(AdmissiblePotential(cube, ok, 0.2), InvalidInput);
  AdmissiblePotential fine3d(cube, ok, 0.3);
  CHECK(fine3d.value_at(Vec(0.5, 0.5, 0.5)) == Complex(1.0));

  auto vanishing = [](const Vec& x) { return Complex(x[0], 0.0); };  // 0 at x=0
  CHECK_THROWS_AS(AdmissiblePotential(cell, vanishing, 0.5), InvalidInput);
}

TEST_CASE("nested potential values and invariants") {
  NestedFamily fam;
  fam.shells.push_back(Polytope::axis_box(Vec(-1, -1), Vec(1, 1)));
  fam.shells.push_back(Polytope::axis_box(Vec(-0.4, -0.4), Vec(0.4, 0.4)));
  fam.m0 = 0.5;
  PiecewiseConstantPotential v(fam, {Complex(1, 0), Complex(2, 0)});
  CHECK(v.value_at(Vec(0.7, 0.0)) == Complex(1, 0));
  CHECK(v.value_at(Vec(0.0, 0.0)) == Complex(2, 0));
  CHECK(v.value_at(Vec(1.5, 0.0)) == Complex(0.0));

  CHECK_THROWS_AS(PiecewiseConstantPotential(fam, {Complex(0), Complex(1)}),
                  InvalidInput);
  CHECK_THROWS_AS(PiecewiseConstantPotential(fam, {Complex(1), Complex(1)}),
                  InvalidInput);
}

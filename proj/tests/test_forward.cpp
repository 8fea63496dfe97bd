#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles/bessel_oracle.hpp"
#include "polyscat/forward.hpp"
#include "polyscat/media.hpp"

using namespace polyscat;

namespace {

double rel(Complex a, Complex b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

double rel_l2(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double num = 0, den = 0;
  for (size_t q = 0; q < a.size(); ++q) {
    num += std::norm(a[q] - b[q]);
    den += std::norm(b[q]);
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace

TEST_CASE("green kernel reference values") {
  CHECK(rel(green_kernel(3, 0.0, Vec(1, 0, 0)), Complex(1.0 / (4 * M_PI), 0)) <
        1e-15);
  CHECK(rel(green_kernel(3, 1.0, Vec(0, 0, M_PI)),
            Complex(-1.0 / (4 * M_PI * M_PI), 0)) < 1e-14);

  // 2D: (i/4) H_0^(1)(1), cross-checked against the series oracle.
  Complex g2 = green_kernel(2, 1.0, Vec(1, 0));
  Complex h0(oracle::j0_series(1.0), oracle::y0_series(1.0));
  CHECK(rel(g2, 0.25 * Complex(0, 1) * h0) < 1e-12);
  CHECK(std::abs(g2 - Complex(-0.02206424, 0.19129942)) < 1e-7);

  CHECK_THROWS_AS(green_kernel(3, 1.0, Vec(0, 0, 0)), EvaluationAtSingularity);
}

TEST_CASE("volume potential of the zero source is zero") {
  Grid grid = Grid::cube(2, 1.0, 32);
  VolumePotentialOperator op(grid, 1.0);
  std::vector<Complex> zeros(grid.size(), 0.0), ones(grid.size(), 1.0);
  auto out = apply_volume_potential(op, zeros, ones);
  for (const auto& x : out) CHECK(std::abs(x) == 0.0);
}

TEST_CASE("volume potential of a point source samples the kernel") {
  Grid grid = Grid::cube(2, 1.0, 32);
  double k = 2.0;
  VolumePotentialOperator op(grid, k);
  std::vector<Complex> ones(grid.size(), 1.0), f(grid.size(), 0.0);
  size_t src = grid.index(10, 17);
  f[src] = 1.0;
  auto out = apply_volume_potential(op, ones, f);
  Vec y = grid.point(src);
  for (int j = 0; j < grid.counts[1]; j += 5)
    for (int i = 0; i < grid.counts[0]; i += 5) {
      size_t q = grid.index(i, j);
      if (q == src) continue;
      Complex expect = grid.cell_volume() * green_kernel(2, k, grid.point(q) - y);
      CHECK(rel(out[q], expect) < 1e-12);
    }
}

TEST_CASE("singular cell integral matches radial quadrature of the kernel") {
  // int_{B_r0} Phi dy computed by a fine midpoint rule in r.
  for (double k : {0.7, 1.5}) {
    for (int n : {2, 3}) {
      double h = 0.05;
      double r0 = n == 2 ? h / std::sqrt(M_PI) : h * std::cbrt(3.0 / (4 * M_PI));
      const int m = 40000;
      Complex acc = 0;
      for (int i = 0; i < m; ++i) {
        double r = (i + 0.5) * r0 / m;
        Vec x = Vec::zero(n);
        x[0] = r;
        double ring = n == 2 ? 2 * M_PI * r : 4 * M_PI * r * r;
        acc += green_kernel(n, k, x) * ring * (r0 / m);
      }
      Grid grid = Grid::cube(n, 1.0, 40);
      grid.h = h;  // only h enters the diagonal entry
      VolumePotentialOperator op(grid, k);
      std::vector<Complex> ones(grid.size(), 1.0), f(grid.size(), 0.0);
      size_t c = n == 2 ? grid.index(20, 20) : grid.index(20, 20, 20);
      f[c] = 1.0;
      auto out = apply_volume_potential(op, ones, f);
      CHECK(rel(out[c], acc) < 1e-6);
    }
  }
}

TEST_CASE("Newtonian potential of a ball (3D, k = 0)") {
  double a = 0.5;
  BallPotential ball(Vec(0, 0, 0), a, 1.0);
  Grid grid = Grid::cube(3, 1.0, 48);
  VolumePotentialOperator op(grid, 0.0);
  auto vs = rasterize(ball, grid);
  std::vector<Complex> ones(grid.size(), 1.0);
  auto u = apply_volume_potential(op, vs, ones);
  for (size_t q = 0; q < u.size(); q += 97) {
    double r = grid.point(q).norm();
    double expect = r <= a ? (3 * a * a - r * r) / 6.0 : a * a * a / (3 * r);
    if (std::abs(r - a) < 2 * grid.h) continue;  // skip the smeared interface
    CHECK(std::abs(u[q].real() - expect) < 0.01 * expect);
    CHECK(std::abs(u[q].imag()) < 1e-12);
  }
}

TEST_CASE("V = 0 solves to the incident wave exactly") {
  CellPartition part;
  part.cells.push_back(Polytope::axis_box(Vec(-0.3, -0.3), Vec(0.3, 0.3)));
  part.d0 = 0.1;
  PiecewiseConstantPotential v(part, {0.0});
  Grid grid = Grid::cube(2, 1.0, 32);
  PlaneWave inc{Vec(1, 0), 2.0};
  auto sol = solve_total_field(v, inc, grid);
  for (size_t q = 0; q < sol.total.size(); ++q) {
    CHECK(sol.scattered[q] == Complex(0.0));
    CHECK(sol.total[q] == inc.at(grid.point(q)));
  }
}

TEST_CASE("born and iterative solutions agree in the contraction regime") {
  CellPartition part;
  part.cells.push_back(Polytope::axis_box(Vec(-0.4, -0.4), Vec(0.4, 0.4)));
  part.d0 = 0.1;
  PiecewiseConstantPotential v(part, {Complex(0.08, 0.0)});
  Grid grid = Grid::cube(2, 1.0, 64);
  PlaneWave inc{Vec(1, 0), 1.0};

  SolveOptions born;
  born.method = SolveOptions::Method::born;
  born.born_terms = 25;
  SolveOptions iter;
  iter.tol = 1e-10;
  auto sol_b = solve_total_field(v, inc, grid, born);
  auto sol_i = solve_total_field(v, inc, grid, iter);
  CHECK(rel_l2(sol_b.scattered, sol_i.scattered) < 1e-6);
  CHECK(sol_i.residual <= 1e-10);
  CHECK(ls_residual(sol_i) < 1e-8);
}

TEST_CASE("h2 norm of constants and zero fields") {
  Grid grid = Grid::cube(2, 1.0, 32);
  std::vector<Complex> c(grid.size(), Complex(3, 4));
  CHECK(h2_norm(c, grid) == doctest::Approx(5.0 * 2.0).epsilon(1e-12));
  std::vector<Complex> z(grid.size(), 0.0);
  CHECK(h2_norm(z, grid) == 0.0);
}

TEST_CASE("h2 norm of a plane wave matches the analytic value") {
  double k = 2.0;
  PlaneWave inc{Vec(0.6, 0.8), k};
  double prev_err = 0;
  for (int N : {32, 64, 128}) {
    Grid grid = Grid::cube(2, 1.0, N);
    auto ui = sample_incident(inc, grid);
    double expect = std::sqrt((1 + k * k + k * k * k * k) * 4.0);
    double err = std::abs(h2_norm(ui, grid) - expect) / expect;
    if (prev_err > 0) CHECK(err < 0.35 * prev_err);  // ~second order
    prev_err = err;
  }
  CHECK(prev_err < 2e-3);
}

TEST_CASE("scattered field h2 norm scales linearly with the contrast") {
  Grid grid = Grid::cube(2, 1.0, 64);
  PlaneWave inc{Vec(1, 0), 1.0};
  CellPartition part;
  part.cells.push_back(Polytope::axis_box(Vec(-0.4, -0.4), Vec(0.4, 0.4)));
  part.d0 = 0.1;
  PiecewiseConstantPotential v1(part, {Complex(0.08, 0.0)});
  PiecewiseConstantPotential v2(part, {Complex(0.04, 0.0)});
  double n1 = h2_norm(solve_total_field(v1, inc, grid).scattered, grid);
  double n2 = h2_norm(solve_total_field(v2, inc, grid).scattered, grid);
  CHECK(std::abs(n1 / n2 - 2.0) < 0.2);
}

TEST_CASE("born series diverges loudly outside the contraction regime") {
  CellPartition part;
  part.cells.push_back(Polytope::axis_box(Vec(-0.4, -0.4), Vec(0.4, 0.4)));
  part.d0 = 0.1;
  PiecewiseConstantPotential v(part, {Complex(5.0, 0.0)});
  Grid grid = Grid::cube(2, 1.0, 64);
  SolveOptions born;
  born.method = SolveOptions::Method::born;
  born.born_terms = 30;
  CHECK_THROWS_AS(solve_total_field(v, PlaneWave{Vec(1, 0), 2.0}, grid, born),
                  DivergentSeries);
}

TEST_CASE("iteration budget exhaustion reports NoConvergence") {
  CellPartition part;
  part.cells.push_back(Polytope::axis_box(Vec(-0.4, -0.4), Vec(0.4, 0.4)));
  part.d0 = 0.1;
  PiecewiseConstantPotential v(part, {Complex(2.0, 0.0)});
  Grid grid = Grid::cube(2, 1.0, 64);
  SolveOptions opt;
  opt.maxit = 1;
  opt.tol = 1e-14;
  CHECK_THROWS_AS(solve_total_field(v, PlaneWave{Vec(1, 0), 2.0}, grid, opt),
                  NoConvergence);
}

TEST_CASE("total field decomposition is exact") {
  CellPartition part;
  part.cells.push_back(Polytope::axis_box(Vec(-0.4, -0.4), Vec(0.4, 0.4)));
  part.d0 = 0.1;
  PiecewiseConstantPotential v(part, {Complex(0.3, 0.1)});
  Grid grid = Grid::cube(2, 1.0, 32);
  PlaneWave inc{Vec(0.6, 0.8), 1.5};
  auto sol = solve_total_field(v, inc, grid);
  auto ui = sample_incident(inc, grid);
  for (size_t q = 0; q < sol.total.size(); q += 37)
    CHECK(std::abs(sol.total[q] - sol.scattered[q] - ui[q]) <=
          1e-15 * (1 + std::abs(sol.total[q])));
}

TEST_CASE("grid invariants") {
  CHECK_THROWS_AS(Grid::cube(2, 1.0, 8), InvalidInput);
  CHECK_THROWS_AS(Grid::cube(4, 1.0, 32), InvalidInput);
  Grid g = Grid::cube(3, 2.0, 16);
  CHECK(g.h == doctest::Approx(0.25));
  CHECK(g.size() == 16u * 16 * 16);
}

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "polyscat/media.hpp"
#include "polyscat/vec.hpp"

namespace polyscat {

// Uniform cell-centered grid on the box [-R, R]^n: node i sits at
// -R + (i + 1/2) h with h = 2R/N.
struct Grid {
  int n = 0;
  double R = 0;
  double h = 0;
  std::array<int, 3> counts{1, 1, 1};

  static Grid cube(int dim, double radius, int per_axis);

  size_t size() const {
    return static_cast<size_t>(counts[0]) * counts[1] * counts[2];
  }
  Vec point(size_t flat) const;
  size_t index(int i, int j, int k = 0) const {
    return static_cast<size_t>(i) +
           static_cast<size_t>(counts[0]) * (static_cast<size_t>(j) +
                                             static_cast<size_t>(counts[1]) * k);
  }
  double cell_volume() const;
  Box box() const;
};

struct PlaneWave {
  Vec direction;  // unit
  double k = 0;   // wavenumber

  Complex at(const Vec& x) const;
};

std::vector<Complex> sample_incident(const PlaneWave& inc, const Grid& grid);

// Outgoing fundamental solution: n=3 gives e^{ik|x|}/(4 pi |x|), n=2 gives
// (i/4) H_0^(1)(k|x|) (and the Laplace kernels at k=0).
Complex green_kernel(int n, double k, const Vec& x);

// Discrete volume potential w -> Phi * w on the grid via padded cyclic FFT
// convolution; the singular cell takes the analytic mean of Phi over the
// equal-volume disc/ball.
class VolumePotentialOperator {
 public:
  VolumePotentialOperator(const Grid& grid, double k);
  ~VolumePotentialOperator();
  VolumePotentialOperator(const VolumePotentialOperator&) = delete;
  VolumePotentialOperator& operator=(const VolumePotentialOperator&) = delete;

  const Grid& grid() const { return grid_; }
  double k() const { return k_; }

  // out = sum_y h^n Phi(x - y) w(y); shapes must match the grid.
  void convolve(const std::vector<Complex>& w, std::vector<Complex>& out) const;

 private:
  struct Impl;
  Grid grid_;
  double k_;
  std::unique_ptr<Impl> impl_;
};

// apply L_V f = Phi * (V f) with V, f sampled on the operator's grid.
std::vector<Complex> apply_volume_potential(const VolumePotentialOperator& op,
                                            const std::vector<Complex>& vsamples,
                                            const std::vector<Complex>& f);

struct SolveOptions {
  enum class Method { born, iterative };
  Method method = Method::iterative;
  int born_terms = 20;
  double tol = 1e-8;  // relative residual
  int maxit = 400;
};

struct FieldSolution {
  Grid grid;
  PlaneWave incident;
  std::vector<Complex> vsamples;   // rasterized V used by the solve
  std::vector<Complex> scattered;  // u^s
  std::vector<Complex> total;      // u = u^i + u^s
  int iterations = 0;
  double residual = 0;
  std::string method;
};

// Solves u^s = k^2 L_V u^s + k^2 L_V u^i on the grid, either by the Born
// (Neumann) series or by a matrix-free BiCGStab on (I - k^2 L_V).
FieldSolution solve_total_field(const Potential& v, const PlaneWave& inc,
                                const Grid& grid, const SolveOptions& opt = {});

// Discrete H^2(B_R) norm: L^2 of the field, its first differences and its
// second differences (one-sided stencils at the box faces).
double h2_norm(const std::vector<Complex>& field, const Grid& grid);

// Relative L2 residual of the discrete Lippmann-Schwinger equation; used by
// tests and diagnostics.
double ls_residual(const FieldSolution& sol);

}  // namespace polyscat

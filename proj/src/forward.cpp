#include "polyscat/forward.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "polyscat/errors.hpp"

namespace polyscat {

namespace {

constexpr Complex kImag(0.0, 1.0);

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

}  // namespace

Grid Grid::cube(int dim, double radius, int per_axis) {
  if (dim != 2 && dim != 3) throw InvalidInput("grid dimension must be 2 or 3");
  if (radius <= 0) throw InvalidInput("grid radius must be positive");
  if (per_axis < 16) throw InvalidInput("need at least 16 samples per axis");
  Grid g;
  g.n = dim;
  g.R = radius;
  g.h = 2 * radius / per_axis;
  g.counts = {per_axis, per_axis, dim == 3 ? per_axis : 1};
  return g;
}

Vec Grid::point(size_t flat) const {
  int i = static_cast<int>(flat % counts[0]);
  int j = static_cast<int>((flat / counts[0]) % counts[1]);
  int k = static_cast<int>(flat / (static_cast<size_t>(counts[0]) * counts[1]));
  Vec p = Vec::zero(n);
  p[0] = -R + (i + 0.5) * h;
  p[1] = -R + (j + 0.5) * h;
  if (n == 3) p[2] = -R + (k + 0.5) * h;
  return p;
}

double Grid::cell_volume() const { return n == 2 ? h * h : h * h * h; }

Box Grid::box() const {
  Vec lo = Vec::zero(n), hi = Vec::zero(n);
  for (int i = 0; i < n; ++i) {
    lo[i] = -R;
    hi[i] = R;
  }
  return {lo, hi};
}

Complex PlaneWave::at(const Vec& x) const {
  return std::exp(kImag * (k * direction.dot(x)));
}

std::vector<Complex> sample_incident(const PlaneWave& inc, const Grid& grid) {
  std::vector<Complex> out(grid.size());
  for (size_t q = 0; q < out.size(); ++q) out[q] = inc.at(grid.point(q));
  return out;
}

Complex green_kernel(int n, double k, const Vec& x) {
  double r = x.norm();
  if (r == 0.0) throw EvaluationAtSingularity("Green kernel at x = 0");
  if (n == 3) return std::exp(kImag * (k * r)) / (4 * M_PI * r);
  if (k == 0.0) return -std::log(r) / (2 * M_PI);
  double kr = k * r;
  return 0.25 * kImag *
         Complex(std::cyl_bessel_j(0.0, kr), std::cyl_neumann(0.0, kr));
}

namespace {

// Mean of the kernel over the disc/ball with the same volume as a grid
// cell, times the cell volume: the corrected diagonal of the Nystrom rule.
Complex singular_cell_integral(int n, double k, double h) {
  if (n == 3) {
    double r0 = h * std::cbrt(3.0 / (4 * M_PI));
    if (k == 0.0) return 0.5 * r0 * r0;
    // int_{B_r0} e^{ik|y|}/(4 pi |y|) dy = int_0^{r0} e^{ikr} r dr
    Complex e = std::exp(kImag * (k * r0));
    return -kImag * r0 * e / k + (e - 1.0) / (k * k);
  }
  double r0 = h / std::sqrt(M_PI);
  if (k == 0.0) return r0 * r0 * (0.25 - 0.5 * std::log(r0));
  // (i/4) int_{D_r0} H_0^(1)(k|y|) dy = (i pi)/(2 k^2) (X H_1^(1)(X) + 2i/pi)
  double X = k * r0;
  Complex h1(std::cyl_bessel_j(1.0, X), std::cyl_neumann(1.0, X));
  return 0.5 * kImag * M_PI / (k * k) * (X * h1 + 2.0 * kImag / M_PI);
}

}  // namespace

struct VolumePotentialOperator::Impl {
  std::array<int, 3> padded{1, 1, 1};
  size_t padded_size = 1;
  std::vector<Complex> kernel_hat;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  fftw_complex* buf = nullptr;

  ~Impl() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (buf) fftw_free(buf);
  }
};

VolumePotentialOperator::VolumePotentialOperator(const Grid& grid, double k)
    : grid_(grid), k_(k), impl_(std::make_unique<Impl>()) {
  const int n = grid.n;
  for (int d = 0; d < n; ++d) impl_->padded[d] = next_pow2(2 * grid.counts[d]);
  impl_->padded_size = static_cast<size_t>(impl_->padded[0]) * impl_->padded[1] *
                       impl_->padded[2];

  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    impl_->buf = fftw_alloc_complex(impl_->padded_size);
    if (n == 2)
      impl_->fwd = fftw_plan_dft_2d(impl_->padded[1], impl_->padded[0],
                                    impl_->buf, impl_->buf, FFTW_FORWARD,
                                    FFTW_ESTIMATE);
    else
      impl_->fwd = fftw_plan_dft_3d(impl_->padded[2], impl_->padded[1],
                                    impl_->padded[0], impl_->buf, impl_->buf,
                                    FFTW_FORWARD, FFTW_ESTIMATE);
    if (n == 2)
      impl_->bwd = fftw_plan_dft_2d(impl_->padded[1], impl_->padded[0],
                                    impl_->buf, impl_->buf, FFTW_BACKWARD,
                                    FFTW_ESTIMATE);
    else
      impl_->bwd = fftw_plan_dft_3d(impl_->padded[2], impl_->padded[1],
                                    impl_->padded[0], impl_->buf, impl_->buf,
                                    FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  // Kernel tensor on wrapped offsets, h^n quadrature weight folded in.
  const double vol = grid.cell_volume();
  auto* b = reinterpret_cast<Complex*>(impl_->buf);
  std::fill(b, b + impl_->padded_size, Complex(0));
  const auto& pad = impl_->padded;
  const int kz = n == 3 ? grid.counts[2] - 1 : 0;
  for (int dz = -kz; dz <= kz; ++dz)
    for (int dy = -(grid.counts[1] - 1); dy <= grid.counts[1] - 1; ++dy)
      for (int dx = -(grid.counts[0] - 1); dx <= grid.counts[0] - 1; ++dx) {
        Complex val;
        if (dx == 0 && dy == 0 && dz == 0) {
          val = singular_cell_integral(n, k, grid.h);
        } else {
          Vec off = Vec::zero(n);
          off[0] = dx * grid.h;
          off[1] = dy * grid.h;
          if (n == 3) off[2] = dz * grid.h;
          val = vol * green_kernel(n, k, off);
        }
        size_t ix = static_cast<size_t>((dx + pad[0]) % pad[0]) +
                    static_cast<size_t>(pad[0]) *
                        (static_cast<size_t>((dy + pad[1]) % pad[1]) +
                         static_cast<size_t>(pad[1]) * ((dz + pad[2]) % pad[2]));
        b[ix] = val;
      }
  fftw_execute(impl_->fwd);
  impl_->kernel_hat.assign(b, b + impl_->padded_size);
}

VolumePotentialOperator::~VolumePotentialOperator() = default;

void VolumePotentialOperator::convolve(const std::vector<Complex>& w,
                                       std::vector<Complex>& out) const {
  if (w.size() != grid_.size()) throw InvalidInput("source/grid size mismatch");
  auto* b = reinterpret_cast<Complex*>(impl_->buf);
  std::fill(b, b + impl_->padded_size, Complex(0));
  const auto& pad = impl_->padded;
  const auto& counts = grid_.counts;
  for (int z = 0; z < counts[2]; ++z)
    for (int y = 0; y < counts[1]; ++y) {
      const Complex* src = w.data() + grid_.index(0, y, z);
      Complex* dst = b + static_cast<size_t>(z) * pad[0] * pad[1] +
                     static_cast<size_t>(y) * pad[0];
      std::copy(src, src + counts[0], dst);
    }
  fftw_execute(impl_->fwd);
  const double scale = 1.0 / static_cast<double>(impl_->padded_size);
  for (size_t q = 0; q < impl_->padded_size; ++q)
    b[q] *= impl_->kernel_hat[q] * scale;
  fftw_execute(impl_->bwd);
  out.resize(grid_.size());
  for (int z = 0; z < counts[2]; ++z)
    for (int y = 0; y < counts[1]; ++y) {
      const Complex* src = b + static_cast<size_t>(z) * pad[0] * pad[1] +
                           static_cast<size_t>(y) * pad[0];
      std::copy(src, src + counts[0], out.data() + grid_.index(0, y, z));
    }
}

std::vector<Complex> apply_volume_potential(const VolumePotentialOperator& op,
                                            const std::vector<Complex>& vsamples,
                                            const std::vector<Complex>& f) {
  if (vsamples.size() != f.size()) throw InvalidInput("shape mismatch");
  std::vector<Complex> w(f.size());
  for (size_t q = 0; q < f.size(); ++q) w[q] = vsamples[q] * f[q];
  std::vector<Complex> out;
  op.convolve(w, out);
  return out;
}

namespace {

double norm2(const std::vector<Complex>& v) {
  double s = 0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

Complex dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex s = 0;
  for (size_t q = 0; q < a.size(); ++q) s += std::conj(a[q]) * b[q];
  return s;
}

// x <- x + alpha y
void axpy(std::vector<Complex>& x, Complex alpha, const std::vector<Complex>& y) {
  for (size_t q = 0; q < x.size(); ++q) x[q] += alpha * y[q];
}

}  // namespace

FieldSolution solve_total_field(const Potential& v, const PlaneWave& inc,
                                const Grid& grid, const SolveOptions& opt) {
  FieldSolution sol;
  sol.grid = grid;
  sol.incident = inc;
  sol.vsamples = rasterize(v, grid);

  VolumePotentialOperator op(grid, inc.k);
  const double k2 = inc.k * inc.k;
  std::vector<Complex> ui = sample_incident(inc, grid);

  auto apply_k2lv = [&](const std::vector<Complex>& f) {
    std::vector<Complex> out = apply_volume_potential(op, sol.vsamples, f);
    for (auto& x : out) x *= k2;
    return out;
  };

  std::vector<Complex> b = apply_k2lv(ui);  // k^2 L_V u^i
  const double bnorm = norm2(b);
  std::vector<Complex> us(grid.size(), Complex(0));

  if (bnorm == 0.0) {
    sol.method = "trivial";
    sol.scattered = us;
    sol.total = ui;
    sol.residual = 0;
    return sol;
  }

  if (opt.method == SolveOptions::Method::born) {
    sol.method = "born";
    std::vector<Complex> term = b;
    double prev_norm = norm2(term), first_norm = prev_norm;
    int growing = 0;
    for (int m = 0; m < opt.born_terms; ++m) {
      axpy(us, 1.0, term);
      term = apply_k2lv(term);
      double tn = norm2(term);
      growing = tn > prev_norm ? growing + 1 : 0;
      if (growing >= 3 && tn > first_norm)
        throw DivergentSeries("Born partial sums are growing");
      prev_norm = tn;
      sol.iterations = m + 1;
    }
  } else {
    sol.method = "bicgstab";
    // BiCGStab on (I - k^2 L_V) u^s = b.
    auto apply_A = [&](const std::vector<Complex>& x) {
      std::vector<Complex> out = apply_k2lv(x);
      for (size_t q = 0; q < x.size(); ++q) out[q] = x[q] - out[q];
      return out;
    };
    std::vector<Complex> r = b, rhat = b;
    std::vector<Complex> p(grid.size(), 0), vv(grid.size(), 0), s, t;
    Complex rho_old = 1, alpha = 1, omega = 1;
    bool done = false;
    for (int it = 0; it < opt.maxit && !done; ++it) {
      Complex rho = dot(rhat, r);
      if (std::abs(rho) < 1e-300) throw NoConvergence("BiCGStab breakdown (rho)");
      Complex beta = (rho / rho_old) * (alpha / omega);
      for (size_t q = 0; q < p.size(); ++q)
        p[q] = r[q] + beta * (p[q] - omega * vv[q]);
      vv = apply_A(p);
      Complex rv = dot(rhat, vv);
      if (std::abs(rv) < 1e-300) throw NoConvergence("BiCGStab breakdown (rhat.v)");
      alpha = rho / rv;
      s = r;
      axpy(s, -alpha, vv);
      if (norm2(s) <= opt.tol * bnorm) {
        axpy(us, alpha, p);
        done = true;
      } else {
        t = apply_A(s);
        double tt = norm2(t);
        if (tt == 0.0) throw NoConvergence("BiCGStab breakdown (t)");
        omega = dot(t, s) / (tt * tt);
        axpy(us, alpha, p);
        axpy(us, omega, s);
        r = s;
        axpy(r, -omega, t);
      }
      rho_old = rho;
      sol.iterations = it + 1;
      if (!done && norm2(r) <= opt.tol * bnorm) done = true;
    }
    if (!done) throw NoConvergence("BiCGStab iterations exhausted");
  }

  // Residual of the discrete Lippmann-Schwinger equation.
  std::vector<Complex> res = apply_k2lv(us);
  for (size_t q = 0; q < res.size(); ++q) res[q] = us[q] - res[q] - b[q];
  sol.residual = norm2(res) / bnorm;

  sol.scattered = std::move(us);
  sol.total = ui;
  for (size_t q = 0; q < sol.total.size(); ++q) sol.total[q] += sol.scattered[q];
  return sol;
}

namespace {

// First difference along an axis, centered inside, 2nd-order one-sided at
// the box faces.
std::vector<Complex> diff_axis(const std::vector<Complex>& f, const Grid& g,
                               int axis) {
  std::vector<Complex> out(f.size());
  const auto& c = g.counts;
  const double inv2h = 1.0 / (2 * g.h);
  auto at = [&](int i, int j, int k) { return f[g.index(i, j, k)]; };
  for (int k = 0; k < c[2]; ++k)
    for (int j = 0; j < c[1]; ++j)
      for (int i = 0; i < c[0]; ++i) {
        int idx[3] = {i, j, k};
        int m = idx[axis];
        Complex d;
        auto shift = [&](int delta) {
          int t[3] = {i, j, k};
          t[axis] += delta;
          return at(t[0], t[1], t[2]);
        };
        if (m == 0)
          d = (-3.0 * shift(0) + 4.0 * shift(1) - shift(2)) * inv2h;
        else if (m == c[axis] - 1)
          d = (3.0 * shift(0) - 4.0 * shift(-1) + shift(-2)) * inv2h;
        else
          d = (shift(1) - shift(-1)) * inv2h;
        out[g.index(i, j, k)] = d;
      }
  return out;
}

}  // namespace

double h2_norm(const std::vector<Complex>& field, const Grid& grid) {
  if (field.size() != grid.size()) throw InvalidInput("field/grid size mismatch");
  const double vol = grid.cell_volume();
  double acc = 0;
  for (const auto& x : field) acc += std::norm(x);

  std::vector<std::vector<Complex>> grads;
  for (int a = 0; a < grid.n; ++a) {
    grads.push_back(diff_axis(field, grid, a));
    for (const auto& x : grads.back()) acc += std::norm(x);
  }
  for (int a = 0; a < grid.n; ++a)
    for (int b = 0; b < grid.n; ++b) {
      std::vector<Complex> hess = diff_axis(grads[a], grid, b);
      for (const auto& x : hess) acc += std::norm(x);
    }
  return std::sqrt(acc * vol);
}

double ls_residual(const FieldSolution& sol) {
  VolumePotentialOperator op(sol.grid, sol.incident.k);
  const double k2 = sol.incident.k * sol.incident.k;
  std::vector<Complex> ui = sample_incident(sol.incident, sol.grid);
  std::vector<Complex> lhs =
      apply_volume_potential(op, sol.vsamples, sol.total);
  double num = 0, den = 0;
  for (size_t q = 0; q < lhs.size(); ++q) {
    Complex r = sol.scattered[q] - k2 * lhs[q];
    num += std::norm(r);
    den += std::norm(sol.scattered[q]);
  }
  return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace polyscat

#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "polyscat/conelab.hpp"
#include "polyscat/forward.hpp"
#include "polyscat/geometry.hpp"

namespace polyscat {

// Scalar field evaluable anywhere (analytic formula or interpolated grid
// data); identity checks take their inputs in this form.
using FieldFn = std::function<Complex(const Vec&)>;

// Bi/trilinear interpolator over the solution grid (clamped at the box).
FieldFn grid_field(const Grid& grid, std::vector<Complex> samples);

// e^{rho.x} at the given points; requires rho.rho = 0 (relative tolerance
// 1e-12), which makes the exponential exactly harmonic.
std::vector<Complex> harmonic_exponential(const CVec& rho,
                                          const std::vector<Vec>& points);

// (apex + cone) intersected with the ball of the given radius around the
// apex: the Lipschitz region used by the corner checks.
struct SectorRegion {
  Cone cone;
  double radius = 0;
};

using Region = std::variant<SectorRegion, Polytope>;

struct AlessandriniTerms {
  Complex volume_term;    // int_U (q - q') u' u_0
  Complex boundary_term;  // int_dU (u_0 dn(u - u') - (u - u') dn u_0)
  double residual = 0;    // |volume - boundary|
};

// Midpoint quadrature of both sides of the orthogonality identity at grid
// step h_quad; normal derivatives by centered differences of step h_quad,
// so the fields must be evaluable one step beyond the boundary.
AlessandriniTerms alessandrini_residual(const Region& region, const FieldFn& q,
                                        const FieldFn& q_prime, const FieldFn& u,
                                        const FieldFn& u_prime, const FieldFn& u0,
                                        double h_quad);

struct CornerLimitResult {
  Complex limit;                                // Richardson-extrapolated
  std::vector<std::pair<double, Complex>> sweep;  // (s, J(s))
  double instability = 0;  // relative disagreement of successive estimates
};

// J(s) = int_{B cap C} e^{s rho.(x - x_c)} dq(x) u'(x) dx / int_C e^{s rho.x},
// extrapolated in 1/s over consecutive (s, 2s, 4s) triples. The sweep must
// be geometric with ratio 2 and have at least three entries.
CornerLimitResult corner_limit(const Cone& cone, double b_radius,
                               const FieldFn& delta_q, const FieldFn& u_prime,
                               const CGOVector& rho_hat,
                               const std::vector<double>& s_list);

struct NodalReport {
  double min_abs = 0;
  Vec argmin;
};

// min |u| over the grid; positive in the small-contrast regime.
NodalReport nodal_check(const FieldSolution& sol);

// h2_norm(u^s) / (k^2 ||V||_inf ||u^i||_{L^2(Omega)}) for plane-wave
// incidence, with ||u^i||_{L^2(Omega)} = sqrt(vol Omega).
double scattered_norm_ratio(const FieldSolution& sol, const Potential& v);

}  // namespace polyscat

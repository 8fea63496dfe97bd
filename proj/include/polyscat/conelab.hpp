#pragma once

#include <vector>

#include "polyscat/geometry.hpp"
#include "polyscat/vec.hpp"

namespace polyscat {

// Isotropic complex frequency rho (rho.rho = 0) together with the data of
// the 3D selection construction when available.
struct CGOVector {
  CVec rho;

  bool has_construction = false;
  Vec w;       // root edge w_1
  Vec z;       // unit, z.w = 0, z.w_j >= z_margin for j > 1
  Vec i_dir;   // unit, orthogonal to both z and w
  Vec r_eps;   // (z + eps*w)/|z + eps*w|
  double eps = 0;
  double z_margin = 0;
};

// Laplace transform of a simplex cone at the origin:
//   int_C e^{rho.x} dx = |w_1 ^ ... ^ w_n| / prod_j(-rho.w_j),
// valid when Re(-rho.w_j) > 0 for every generator (else NonConvergent).
Complex simplex_cone_transform(const std::vector<Vec>& gens, const CVec& rho);

// Transform of a general convex polyhedral cone by fanning it into simplex
// cones from the root generator; exact up to floating point.
Complex fan_transform(const Cone& cone, const CVec& rho);

// Anisotropic frequency selection for a 3D cone: rho = -R_eps - i*I with z
// chosen through the supporting plane of the root edge (maximum-margin z
// found via the minimum-norm point of the projected generators).
CGOVector choose_rho(const Cone& cone, double eps);

// Isotropic frequency with -Re rho = certificate axis (interior of the
// cone) and Im rho a unit vector orthogonal to it. This is the 2D selection
// rule; in 3D it gives a balanced convergent frequency with decay rate at
// least the cone margin.
CGOVector interior_rho(const Cone& cone);

// The two pieces of the 3D transform: the simplex cone C1 spanned by
// (w_1, w_2, w_m), which blows up as eps -> 0, and the remainder cone
// C' = cone(w_2, ..., w_m), which stays bounded.
struct SplitTransform {
  Complex c1_part;
  Complex rest_part;
};
SplitTransform split_transform(const Cone& cone, const CVec& rho);

struct CertificationRow {
  double eps = 0;  // 0 in 2D (no eps parameter in the interior rule)
  double s = 1;
  Complex transform;
  double scaled_abs = 0;  // s^n |T(s)|
  double c1_abs = 0;      // 3D split magnitudes at this (eps, s)
  double rest_abs = 0;
};

struct NonvanishingReport {
  int dim = 0;
  std::vector<CertificationRow> rows;
  double min_scaled = 0;  // min over rows of s^n |T(s)|
};

// Evaluates T(s) = fan_transform(cone, s*rho_hat) over the scale sweep and,
// in 3D, over the eps sweep of choose_rho; certifies that s^n |T(s)| stays
// bounded away from zero and reports the C1/C' split.
NonvanishingReport certify_nonvanishing(const Cone& cone,
                                        const std::vector<double>& eps_list,
                                        const std::vector<double>& s_list);

// Same sweep with a caller-supplied frequency instead of the built-in
// selection rules.
NonvanishingReport certify_nonvanishing(const Cone& cone,
                                        const CGOVector& rho_hat,
                                        const std::vector<double>& s_list);

}  // namespace polyscat

#pragma once

#include <vector>

#include "polyscat/forward.hpp"
#include "polyscat/vec.hpp"

namespace polyscat {

struct FarFieldPattern {
  int n = 0;
  double k = 0;
  Vec incident_direction;
  std::vector<Vec> directions;  // unit observation directions
  std::vector<Complex> values;
};

// 2D: uniform angles starting at angle 0; 3D: Fibonacci sphere points.
std::vector<Vec> sphere_directions(int n, int count);

// A(xhat) = c_n k^2 sum_y h^n e^{-ik xhat.y} V(y) u(y), with c_3 = 1/(4 pi)
// and c_2 = e^{i pi/4} / sqrt(8 pi k) (the large-argument Hankel constant).
FarFieldPattern far_field(const FieldSolution& sol, const std::vector<Vec>& dirs);

// Relative gap ||A - A'|| / (||A|| + ||A'||) in the equal-weight discrete
// L^2 norm on the sphere; 0 iff the sample vectors coincide.
double far_field_distance(const FarFieldPattern& a, const FarFieldPattern& b);

// Equal-weight discrete L^2(S^{n-1}) norm of the pattern.
double pattern_norm(const FarFieldPattern& a);

}  // namespace polyscat

#pragma once

// Brute-force convex-hull oracle, independent of the production hull code.
// A point is extreme iff it is not in the convex hull of the others; hull
// membership is tested by Caratheodory enumeration of simplices.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "polyscat/vec.hpp"

namespace polyscat::oracle {

// Is p a convex combination of some <= n+1 points of S?
inline bool in_convex_hull(const Vec& p, const std::vector<Vec>& S,
                           double tol = 1e-9) {
  const int n = p.n;
  const int m = static_cast<int>(S.size());
  std::vector<int> subset;
  bool found = false;
  std::function<void(int, int)> rec = [&](int start, int left) {
    if (found) return;
    const int s = static_cast<int>(subset.size());
    if (s >= 1) {
      // Solve sum(lambda_i x_i) = p, sum(lambda_i) = 1 in least squares and
      // accept when the residual vanishes and all lambda_i >= -tol.
      Eigen::MatrixXd A(n + 1, s);
      Eigen::VectorXd b(n + 1);
      for (int i = 0; i < s; ++i) {
        for (int d = 0; d < n; ++d) A(d, i) = S[subset[i]][d];
        A(n, i) = 1.0;
      }
      for (int d = 0; d < n; ++d) b(d) = p[d];
      b(n) = 1.0;
      Eigen::VectorXd lam = A.colPivHouseholderQr().solve(b);
      if ((A * lam - b).norm() <= tol && lam.minCoeff() >= -tol) {
        found = true;
        return;
      }
    }
    if (left == 0) return;
    for (int i = start; i < m && !found; ++i) {
      subset.push_back(i);
      rec(i + 1, left - 1);
      subset.pop_back();
    }
  };
  rec(0, n + 1);
  return found;
}

// Extreme points of a finite set by exhaustive membership checks.
inline std::vector<Vec> extreme_points(const std::vector<Vec>& pts,
                                       double tol = 1e-9) {
  std::vector<Vec> out;
  for (size_t i = 0; i < pts.size(); ++i) {
    std::vector<Vec> others;
    for (size_t j = 0; j < pts.size(); ++j) {
      if (j == i) continue;
      if (distance(pts[i], pts[j]) <= tol) {
        if (j < i) {
          others.clear();
          break;  // exact duplicate already classified
        }
        continue;
      }
      others.push_back(pts[j]);
    }
    if (others.empty() && !pts.empty()) continue;
    if (!in_convex_hull(pts[i], others, tol)) out.push_back(pts[i]);
  }
  return out;
}

}  // namespace polyscat::oracle

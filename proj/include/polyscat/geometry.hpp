#pragma once

#include <optional>
#include <vector>

#include "polyscat/errors.hpp"
#include "polyscat/vec.hpp"

namespace polyscat {

// Tolerance for on-hyperplane / coincident-point tests, in model units.
inline constexpr double kGeomTol = 1e-9;

struct Facet {
  Vec normal;                   // outward unit normal
  double offset = 0;            // normal . x = offset on the facet plane
  std::vector<int> vertex_ids;  // 2D: the two endpoints; 3D: ordered ring
};

// Bounded open convex polytope, stored by its extreme points and facets.
// In 2D the vertex list is in counterclockwise order.
class Polytope {
 public:
  // Convex hull of the given points with redundant points removed.
  // Throws DegeneratePolytope if the hull is not full-dimensional.
  static Polytope from_points(const std::vector<Vec>& points);

  // Axis-aligned box [lo, hi] as a polytope.
  static Polytope axis_box(const Vec& lo, const Vec& hi);

  int dim() const { return n_; }
  const std::vector<Vec>& vertices() const { return verts_; }
  const std::vector<Facet>& facets() const { return facets_; }

  bool contains(const Vec& p, double tol = kGeomTol) const;

  // min over facets of (offset - normal.p); positive inside, equals the
  // distance from an interior point to the boundary.
  double depth(const Vec& p) const;

  // Euclidean distance from p to the closed polytope (0 if inside).
  double distance(const Vec& p) const;

  double volume() const;
  Box bounds() const;
  Vec centroid() const;

  // Indices of vertices joined to vertex vid by an edge.
  std::vector<int> neighbors(int vid) const;

  // Index of the vertex within kGeomTol of p, or -1.
  int find_vertex(const Vec& p) const;

 private:
  int n_ = 0;
  std::vector<Vec> verts_;
  std::vector<Facet> facets_;
};

// Convex polyhedral cone smaller than a half-space, given by its apex and
// unit edge generators. In 3D the generators are in cyclic order, so
// consecutive pairs (and the wrap-around pair) span boundary facets.
class Cone {
 public:
  // Normalizes, drops non-extreme directions and orders the rest.
  // Throws NoSeparatingVector if no unit a has a.w_j > 0 for all j.
  static Cone from_generators(const Vec& apex, const std::vector<Vec>& gens);

  int dim() const { return n_; }
  const Vec& apex() const { return apex_; }
  const std::vector<Vec>& generators() const { return gens_; }

  // Half-space certificate: unit axis with axis.w_j >= margin > 0.
  const Vec& axis() const { return axis_; }
  double margin() const { return margin_; }

  // Whether the direction u (not necessarily unit) lies in the closed cone.
  bool contains_direction(const Vec& u, double tol = kGeomTol) const;

  // Rotation of the generator list so that generators()[root] comes first;
  // used to test fan-root invariance of cone transforms.
  Cone rerooted(int root) const;

 private:
  int n_ = 0;
  Vec apex_;
  std::vector<Vec> gens_;
  Vec axis_;
  double margin_ = 0;
};

// Vertex cone of p at x_c: generators are unit directions along the edges
// incident to x_c; the cone coincides with p near x_c.
Cone cone_at_vertex(const Polytope& p, const Vec& x_c);

// Minimum-norm point of the convex hull of the given points (exact small-d
// computation by Caratheodory enumeration). Used for half-space
// certificates and the z-vector selection of cone transforms.
Vec min_norm_point(const std::vector<Vec>& points);

// Ordered cells Sigma_1, Sigma_2, ... with escape clearance d0.
struct CellPartition {
  std::vector<std::optional<Polytope>> cells;
  double d0 = 0;

  int dim() const;
  Box bounds() const;
};

// Nested shells D_1 >> D_2 >> ... with containment margin m0.
struct NestedFamily {
  std::vector<std::optional<Polytope>> shells;
  double m0 = 0;

  int dim() const;
  Box bounds() const;
};

struct WitnessPath {
  int cell = -1;
  Vec vertex;              // the escaping vertex of Sigma_cell
  std::vector<Vec> nodes;  // grid path from the vertex to the box boundary
};

struct ClearanceResult {
  bool pass = false;
  int failing_cell = -1;  // first cell with no escaping vertex
  std::vector<WitnessPath> paths;
};

// Certifies, for every nonempty Sigma_j, a vertex joined to the bounding-box
// boundary by a grid path staying distance >= d0 from all Sigma_k with k > j.
// BFS on the rasterized complement at step h; requires h <= d0/4.
ClearanceResult check_cell_clearance(const CellPartition& part, double h);

struct NestedResult {
  bool pass = false;
  int failing_shell = -1;  // index j with D_j not compactly containing D_{j+1}
};

// Every vertex of D_{j+1} must lie inside D_j with facet depth >= m0.
NestedResult check_nested(const NestedFamily& fam);

// rows x cols array of side-a square cells centered at the origin in
// row-major order (top-left first), which satisfies the escape ordering.
CellPartition pixel_lattice(int rows, int cols, double side, double d0);

}  // namespace polyscat

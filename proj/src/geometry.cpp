#include "polyscat/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>

namespace polyscat {

namespace {

std::vector<Vec> dedupe(const std::vector<Vec>& pts, double tol) {
  std::vector<Vec> out;
  for (const auto& p : pts) {
    bool dup = false;
    for (const auto& q : out)
      if (distance(p, q) <= tol) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(p);
  }
  return out;
}

double coordinate_scale(const std::vector<Vec>& pts) {
  double s = 1.0;
  for (const auto& p : pts)
    for (int i = 0; i < p.n; ++i) s = std::max(s, std::abs(p[i]));
  return s;
}

// Andrew's monotone chain; returns indices of hull vertices in CCW order,
// collinear points dropped.
std::vector<int> hull_2d(const std::vector<Vec>& pts, double tol) {
  const int m = static_cast<int>(pts.size());
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (pts[a][0] != pts[b][0]) return pts[a][0] < pts[b][0];
    return pts[a][1] < pts[b][1];
  });

  auto turn = [&](int a, int b, int c) {
    return (pts[b] - pts[a]).cross2(pts[c] - pts[a]);
  };

  std::vector<int> hull;
  for (int pass = 0; pass < 2; ++pass) {
    size_t start = hull.size();
    for (int i = 0; i < m; ++i) {
      int id = idx[pass == 0 ? i : m - 1 - i];
      while (hull.size() >= start + 2 &&
             turn(hull[hull.size() - 2], hull.back(), id) <= tol)
        hull.pop_back();
      hull.push_back(id);
    }
    hull.pop_back();  // endpoint repeats as the start of the other pass
  }
  return hull;
}

// In-plane orthonormal basis perpendicular to unit vector a.
void plane_basis(const Vec& a, Vec& b1, Vec& b2) {
  Vec seed = std::abs(a[0]) < 0.9 ? Vec(1, 0, 0) : Vec(0, 1, 0);
  b1 = (seed - a * seed.dot(a)).normalized();
  b2 = a.cross(b1);
}

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b) {
  Vec ab = b - a;
  double t = ab.norm2() > 0 ? (p - a).dot(ab) / ab.norm2() : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + ab * t);
}

}  // namespace

Polytope Polytope::from_points(const std::vector<Vec>& raw) {
  if (raw.empty()) throw DegeneratePolytope("no points given");
  const int n = raw[0].n;
  for (const auto& p : raw) {
    if (p.n != n) throw InvalidInput("mixed point dimensions");
    for (int i = 0; i < n; ++i)
      if (!std::isfinite(p[i])) throw InvalidInput("non-finite coordinate");
  }
  std::vector<Vec> pts = dedupe(raw, kGeomTol);
  if (static_cast<int>(pts.size()) < n + 1)
    throw DegeneratePolytope("fewer than n+1 distinct points");
  const double scale = coordinate_scale(pts);
  const double tol = kGeomTol * scale;

  Polytope poly;
  poly.n_ = n;

  if (n == 2) {
    std::vector<int> h = hull_2d(pts, tol * scale);
    if (h.size() < 3) throw DegeneratePolytope("2D hull is not a polygon");
    for (int id : h) poly.verts_.push_back(pts[id]);
    const int m = static_cast<int>(poly.verts_.size());
    for (int i = 0; i < m; ++i) {
      const Vec& a = poly.verts_[i];
      const Vec& b = poly.verts_[(i + 1) % m];
      Vec edge = b - a;
      Vec nrm = Vec(edge[1], -edge[0]).normalized();  // outward for CCW ring
      Facet f;
      f.normal = nrm;
      f.offset = nrm.dot(a);
      f.vertex_ids = {i, (i + 1) % m};
      poly.facets_.push_back(std::move(f));
    }
    return poly;
  }

  // 3D: exhaustive supporting-plane enumeration. Fine at desk scale; the
  // cells handled here have tens of vertices, not thousands.
  const int m = static_cast<int>(pts.size());
  struct Plane {
    Vec normal;
    double offset;
    std::vector<int> onset;
  };
  std::vector<Plane> planes;
  bool full_dim = false;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        Vec nrm = (pts[j] - pts[i]).cross(pts[k] - pts[i]);
        double len = nrm.norm();
        if (len <= tol * scale) continue;  // collinear triple
        nrm = nrm * (1.0 / len);
        double off = nrm.dot(pts[i]);
        bool above = false, below = false;
        for (int q = 0; q < m && !(above && below); ++q) {
          double s = nrm.dot(pts[q]) - off;
          if (s > tol) above = true;
          if (s < -tol) below = true;
        }
        if (above && below) {
          full_dim = true;
          continue;
        }
        if (above) {  // flip so all points are on the negative side
          nrm = -nrm;
          off = -off;
        }
        bool seen = false;
        for (const auto& pl : planes)
          if ((pl.normal - nrm).norm() < 1e-7 &&
              std::abs(pl.offset - off) < 1e-7 * scale) {
            seen = true;
            break;
          }
        if (!seen) {
          Plane pl;
          pl.normal = nrm;
          pl.offset = off;
          for (int q = 0; q < m; ++q)
            if (std::abs(nrm.dot(pts[q]) - off) <= tol) pl.onset.push_back(q);
          planes.push_back(std::move(pl));
        }
      }
  if (!full_dim || planes.size() < 4)
    throw DegeneratePolytope("3D point set is not full-dimensional");

  // Face rings: 2D hull of the on-plane points, oriented CCW about the
  // outward normal. Hull vertices of the faces are the extreme points.
  std::vector<int> vertex_of(m, -1);
  for (auto& pl : planes) {
    Vec b1, b2;
    plane_basis(pl.normal, b1, b2);
    std::vector<Vec> flat;
    flat.reserve(pl.onset.size());
    for (int id : pl.onset) flat.emplace_back(pts[id].dot(b1), pts[id].dot(b2));
    std::vector<int> ring = hull_2d(flat, tol * scale);
    if (ring.size() < 3) throw DegeneratePolytope("degenerate face");
    // hull_2d is CCW in (b1, b2); (b1 x b2) = normal, so the ring is CCW
    // when viewed from outside already.
    std::vector<int> ids;
    for (int r : ring) ids.push_back(pl.onset[static_cast<size_t>(r)]);
    pl.onset = std::move(ids);
    for (int id : pl.onset) vertex_of[id] = 1;
  }

  int next = 0;
  for (int q = 0; q < m; ++q)
    if (vertex_of[q] == 1) {
      vertex_of[q] = next++;
      poly.verts_.push_back(pts[q]);
    }
  for (const auto& pl : planes) {
    Facet f;
    f.normal = pl.normal;
    f.offset = pl.offset;
    for (int id : pl.onset) f.vertex_ids.push_back(vertex_of[id]);
    poly.facets_.push_back(std::move(f));
  }
  return poly;
}

Polytope Polytope::axis_box(const Vec& lo, const Vec& hi) {
  std::vector<Vec> pts;
  if (lo.n == 2) {
    pts = {Vec(lo[0], lo[1]), Vec(hi[0], lo[1]), Vec(hi[0], hi[1]),
           Vec(lo[0], hi[1])};
  } else {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          pts.emplace_back(a ? hi[0] : lo[0], b ? hi[1] : lo[1],
                           c ? hi[2] : lo[2]);
  }
  return from_points(pts);
}

bool Polytope::contains(const Vec& p, double tol) const {
  for (const auto& f : facets_)
    if (f.normal.dot(p) > f.offset + tol) return false;
  return true;
}

double Polytope::depth(const Vec& p) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& f : facets_) d = std::min(d, f.offset - f.normal.dot(p));
  return d;
}

double Polytope::distance(const Vec& p) const {
  if (contains(p, 0.0)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  if (n_ == 2) {
    const int m = static_cast<int>(verts_.size());
    for (int i = 0; i < m; ++i)
      best = std::min(best,
                      point_segment_distance(p, verts_[i], verts_[(i + 1) % m]));
    return best;
  }
  for (const auto& f : facets_) {
    // Projection onto the facet plane; accept if it lands inside the face.
    double s = f.normal.dot(p) - f.offset;
    Vec proj = p - f.normal * s;
    Vec b1, b2;
    plane_basis(f.normal, b1, b2);
    const auto& ring = f.vertex_ids;
    const int r = static_cast<int>(ring.size());
    bool inside = true;
    for (int i = 0; i < r && inside; ++i) {
      Vec a = verts_[ring[i]], b = verts_[ring[(i + 1) % r]];
      Vec ea(b.dot(b1) - a.dot(b1), b.dot(b2) - a.dot(b2));
      Vec pa(proj.dot(b1) - a.dot(b1), proj.dot(b2) - a.dot(b2));
      if (ea.cross2(pa) < -kGeomTol) inside = false;
    }
    if (inside) best = std::min(best, std::abs(s));
    for (int i = 0; i < r; ++i)
      best = std::min(
          best, point_segment_distance(p, verts_[ring[i]], verts_[ring[(i + 1) % r]]));
  }
  return best;
}

double Polytope::volume() const {
  if (n_ == 2) {
    double a = 0;
    const int m = static_cast<int>(verts_.size());
    for (int i = 0; i < m; ++i) a += verts_[i].cross2(verts_[(i + 1) % m]);
    return 0.5 * std::abs(a);
  }
  // V = (1/3) sum_f offset_f * area_f by the divergence theorem.
  double v = 0;
  for (const auto& f : facets_) {
    Vec b1, b2;
    plane_basis(f.normal, b1, b2);
    const auto& ring = f.vertex_ids;
    const int r = static_cast<int>(ring.size());
    double area2 = 0;
    for (int i = 0; i < r; ++i) {
      Vec a(verts_[ring[i]].dot(b1), verts_[ring[i]].dot(b2));
      Vec b(verts_[ring[(i + 1) % r]].dot(b1), verts_[ring[(i + 1) % r]].dot(b2));
      area2 += a.cross2(b);
    }
    v += f.offset * 0.5 * std::abs(area2);
  }
  return v / 3.0;
}

Box Polytope::bounds() const {
  Box b{verts_[0], verts_[0]};
  for (const auto& p : verts_)
    for (int i = 0; i < n_; ++i) {
      b.lo[i] = std::min(b.lo[i], p[i]);
      b.hi[i] = std::max(b.hi[i], p[i]);
    }
  return b;
}

Vec Polytope::centroid() const {
  Vec c = Vec::zero(n_);
  for (const auto& p : verts_) c = c + p;
  return c * (1.0 / static_cast<double>(verts_.size()));
}

std::vector<int> Polytope::neighbors(int vid) const {
  std::vector<int> nbs;
  auto add = [&](int id) {
    if (id != vid && std::find(nbs.begin(), nbs.end(), id) == nbs.end())
      nbs.push_back(id);
  };
  for (const auto& f : facets_) {
    const auto& ring = f.vertex_ids;
    const int r = static_cast<int>(ring.size());
    for (int i = 0; i < r; ++i) {
      int a = ring[i], b = ring[(i + 1) % r];
      if (a == vid) add(b);
      if (b == vid) add(a);
    }
  }
  return nbs;
}

int Polytope::find_vertex(const Vec& p) const {
  for (size_t i = 0; i < verts_.size(); ++i)
    if (polyscat::distance(verts_[i], p) <= kGeomTol) return static_cast<int>(i);
  return -1;
}

Vec min_norm_point(const std::vector<Vec>& points) {
  const int n = points[0].n;
  const int m = static_cast<int>(points.size());
  double best = std::numeric_limits<double>::infinity();
  Vec best_p = Vec::zero(n);

  // Enumerate affinely independent subsets of size <= n+1 (Caratheodory);
  // the minimizer lies in the relative interior of one of them.
  std::vector<int> subset;
  auto consider = [&]() {
    const int s = static_cast<int>(subset.size());
    Eigen::MatrixXd kkt(s + 1, s + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j)
        kkt(i, j) = 2.0 * points[subset[i]].dot(points[subset[j]]);
    for (int i = 0; i < s; ++i) {
      kkt(i, s) = 1.0;
      kkt(s, i) = 1.0;
    }
    kkt(s, s) = 0.0;
    rhs(s) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible()) return;
    Eigen::VectorXd sol = lu.solve(rhs);
    Vec p = Vec::zero(n);
    for (int i = 0; i < s; ++i) {
      if (sol(i) < -1e-12) return;  // outside the simplex
      p = p + points[subset[i]] * sol(i);
    }
    if (p.norm() < best) {
      best = p.norm();
      best_p = p;
    }
  };
  std::function<void(int, int)> rec = [&](int start, int left) {
    if (!subset.empty()) consider();
    if (left == 0) return;
    for (int i = start; i < m; ++i) {
      subset.push_back(i);
      rec(i + 1, left - 1);
      subset.pop_back();
    }
  };
  rec(0, n + 1);
  return best_p;
}

Cone Cone::from_generators(const Vec& apex, const std::vector<Vec>& raw) {
  if (raw.size() < 2) throw InvalidInput("cone needs at least two generators");
  const int n = apex.n;
  std::vector<Vec> gens;
  for (const auto& g : raw) {
    if (g.n != n) throw InvalidInput("generator dimension mismatch");
    if (g.norm() <= kGeomTol) throw InvalidInput("zero generator");
    gens.push_back(g.normalized());
  }
  gens = dedupe(gens, kGeomTol);

  Vec p = min_norm_point(gens);
  double margin = p.norm();
  if (margin <= kGeomTol)
    throw NoSeparatingVector("cone is not smaller than a half-space");
  Vec axis = p * (1.0 / margin);

  Cone cone;
  cone.n_ = n;
  cone.apex_ = apex;
  cone.axis_ = axis;

  if (n == 2) {
    // Extremes along the perpendicular of the axis.
    Vec t = axis.perp();
    int lo = 0, hi = 0;
    auto coord = [&](const Vec& g) { return t.dot(g) / axis.dot(g); };
    for (int i = 1; i < static_cast<int>(gens.size()); ++i) {
      if (coord(gens[i]) < coord(gens[lo])) lo = i;
      if (coord(gens[i]) > coord(gens[hi])) hi = i;
    }
    cone.gens_ = {gens[lo], gens[hi]};
    if (lo == hi) throw InvalidInput("2D cone needs two distinct generators");
  } else {
    // Central projection onto the plane axis.x = 1; the cone is the cone
    // over the convex polygon of the projected points, so the 2D hull gives
    // both extremality and the cyclic boundary order.
    Vec b1, b2;
    plane_basis(axis, b1, b2);
    std::vector<Vec> flat;
    for (const auto& g : gens) {
      Vec q = g * (1.0 / axis.dot(g));
      flat.emplace_back(q.dot(b1), q.dot(b2));
    }
    std::vector<int> ring = hull_2d(flat, kGeomTol);
    if (ring.size() < 3)
      throw InvalidInput("3D cone generators are coplanar with the axis");
    for (int id : ring) cone.gens_.push_back(gens[static_cast<size_t>(id)]);
  }
  for (const auto& g : cone.gens_)
    cone.margin_ = cone.margin_ == 0 ? axis.dot(g)
                                     : std::min(cone.margin_, axis.dot(g));
  cone.margin_ = std::min(cone.margin_, margin);
  return cone;
}

bool Cone::contains_direction(const Vec& u, double tol) const {
  if (u.norm() <= tol) return true;
  if (n_ == 2) {
    if (axis_.dot(u) < -tol) return false;
    return gens_[0].cross2(u) >= -tol * u.norm() &&
           u.cross2(gens_[1]) >= -tol * u.norm();
  }
  const int m = static_cast<int>(gens_.size());
  for (int i = 0; i < m; ++i) {
    Vec nrm = gens_[i].cross(gens_[(i + 1) % m]);
    if (nrm.dot(axis_) < 0) nrm = -nrm;
    if (nrm.dot(u) < -tol * u.norm() * std::max(nrm.norm(), kGeomTol))
      return false;
  }
  return true;
}

Cone Cone::rerooted(int root) const {
  Cone c = *this;
  const int m = static_cast<int>(gens_.size());
  c.gens_.clear();
  for (int i = 0; i < m; ++i) c.gens_.push_back(gens_[(root + i) % m]);
  return c;
}

Cone cone_at_vertex(const Polytope& p, const Vec& x_c) {
  int vid = p.find_vertex(x_c);
  if (vid < 0) throw NotAVertex("point is not a vertex of the polytope");
  std::vector<Vec> gens;
  for (int nb : p.neighbors(vid))
    gens.push_back((p.vertices()[nb] - p.vertices()[vid]).normalized());
  return Cone::from_generators(p.vertices()[vid], gens);
}

int CellPartition::dim() const {
  for (const auto& c : cells)
    if (c) return c->dim();
  return 0;
}

Box CellPartition::bounds() const {
  std::optional<Box> b;
  for (const auto& c : cells)
    if (c) b = b ? Box::hull(*b, c->bounds()) : c->bounds();
  if (!b) throw InvalidInput("partition has no nonempty cell");
  return *b;
}

int NestedFamily::dim() const {
  for (const auto& s : shells)
    if (s) return s->dim();
  return 0;
}

Box NestedFamily::bounds() const {
  std::optional<Box> b;
  for (const auto& s : shells)
    if (s) b = b ? Box::hull(*b, s->bounds()) : s->bounds();
  if (!b) throw InvalidInput("family has no nonempty shell");
  return *b;
}

namespace {

struct LatticeInfo {
  Vec origin;
  std::array<int, 3> dims{1, 1, 1};
  int n = 0;
  double h = 0;

  size_t size() const {
    return static_cast<size_t>(dims[0]) * dims[1] * dims[2];
  }
  Vec node(size_t flat) const {
    int i = static_cast<int>(flat % dims[0]);
    int j = static_cast<int>((flat / dims[0]) % dims[1]);
    int k = static_cast<int>(flat / (static_cast<size_t>(dims[0]) * dims[1]));
    Vec p = origin;
    p[0] += i * h;
    p[1] += j * h;
    if (n == 3) p[2] += k * h;
    return p;
  }
  bool on_boundary(size_t flat) const {
    int i = static_cast<int>(flat % dims[0]);
    int j = static_cast<int>((flat / dims[0]) % dims[1]);
    int k = static_cast<int>(flat / (static_cast<size_t>(dims[0]) * dims[1]));
    if (i == 0 || i == dims[0] - 1 || j == 0 || j == dims[1] - 1) return true;
    return n == 3 && (k == 0 || k == dims[2] - 1);
  }
};

}  // namespace

ClearanceResult check_cell_clearance(const CellPartition& part, double h) {
  if (part.d0 <= 0) throw InvalidInput("clearance d0 must be positive");
  if (h > part.d0 / 4 + 1e-15)
    throw InvalidInput("clearance grid step must satisfy h <= d0/4");

  const int n = part.dim();
  if (n == 0) throw InvalidInput("partition has no nonempty cell");
  Box box = part.bounds().inflated(part.d0 + 5 * h);

  LatticeInfo lat;
  lat.n = n;
  lat.h = h;
  lat.origin = box.lo;
  for (int i = 0; i < n; ++i)
    lat.dims[i] = static_cast<int>(std::floor((box.hi[i] - box.lo[i]) / h)) + 1;
  const size_t nn = lat.size();

  // allowed_after[j][node]: distance >= d0 from every nonempty Sigma_k, k > j.
  const int nc = static_cast<int>(part.cells.size());
  std::vector<std::vector<char>> mask(nc);
  for (int j = 0; j < nc; ++j) {
    mask[j].assign(nn, 1);
    if (!part.cells[j]) continue;
    const Polytope& cell = *part.cells[j];
    Box reach = cell.bounds().inflated(part.d0 + h);
    for (size_t q = 0; q < nn; ++q) {
      Vec x = lat.node(q);
      if (!reach.contains(x)) continue;
      if (cell.distance(x) < part.d0) mask[j][q] = 0;
    }
  }
  std::vector<std::vector<char>> allowed_after(nc + 1);
  allowed_after[nc].assign(nn, 1);
  for (int j = nc - 1; j >= 0; --j) {
    allowed_after[j] = allowed_after[j + 1];
    if (part.cells[j])
      for (size_t q = 0; q < nn; ++q)
        if (!mask[j][q]) allowed_after[j][q] = 0;
  }

  // Neighbor offsets: full 3^n - 1 stencil.
  std::vector<long long> offs;
  for (int dz = (n == 3 ? -1 : 0); dz <= (n == 3 ? 1 : 0); ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        offs.push_back(dx + static_cast<long long>(dy) * lat.dims[0] +
                       static_cast<long long>(dz) * lat.dims[0] * lat.dims[1]);
      }
  auto neighbor_ok = [&](size_t q, long long off) {
    long long t = static_cast<long long>(q) + off;
    if (t < 0 || t >= static_cast<long long>(nn)) return false;
    // Guard against row wrap-around.
    Vec a = lat.node(q), b = lat.node(static_cast<size_t>(t));
    return distance(a, b) <= h * std::sqrt(static_cast<double>(n)) + 1e-12;
  };

  ClearanceResult result;
  result.pass = true;
  for (int j = 0; j < nc; ++j) {
    if (!part.cells[j]) continue;
    const auto& allowed = allowed_after[j + 1];
    const Polytope& cell = *part.cells[j];

    bool escaped = false;
    WitnessPath path;
    for (const Vec& v : cell.vertices()) {
      // Seed from grid nodes within one cell of the vertex.
      std::vector<size_t> seeds;
      std::array<int, 3> base{0, 0, 0};
      for (int i = 0; i < n; ++i)
        base[i] = static_cast<int>(std::floor((v[i] - lat.origin[i]) / h));
      for (int dz = 0; dz <= (n == 3 ? 1 : 0); ++dz)
        for (int dy = 0; dy <= 1; ++dy)
          for (int dx = 0; dx <= 1; ++dx) {
            std::array<int, 3> ix{base[0] + dx, base[1] + dy, base[2] + dz};
            bool ok = true;
            for (int i = 0; i < n; ++i)
              if (ix[i] < 0 || ix[i] >= lat.dims[i]) ok = false;
            if (!ok) continue;
            size_t flat = static_cast<size_t>(ix[0]) +
                          static_cast<size_t>(ix[1]) * lat.dims[0] +
                          static_cast<size_t>(ix[2]) * lat.dims[0] * lat.dims[1];
            if (allowed[flat]) seeds.push_back(flat);
          }
      if (seeds.empty()) continue;

      std::vector<int> prev(nn, -2);
      std::deque<size_t> queue;
      for (size_t s : seeds)
        if (prev[s] == -2) {
          prev[s] = -1;
          queue.push_back(s);
        }
      size_t goal = nn;
      while (!queue.empty()) {
        size_t q = queue.front();
        queue.pop_front();
        if (lat.on_boundary(q)) {
          goal = q;
          break;
        }
        for (long long off : offs) {
          if (!neighbor_ok(q, off)) continue;
          size_t t = static_cast<size_t>(static_cast<long long>(q) + off);
          if (prev[t] != -2 || !allowed[t]) continue;
          prev[t] = static_cast<int>(q);
          queue.push_back(t);
        }
      }
      if (goal == nn) continue;
      path.cell = j;
      path.vertex = v;
      for (long long q = static_cast<long long>(goal); q >= 0;
           q = prev[static_cast<size_t>(q)])
        path.nodes.push_back(lat.node(static_cast<size_t>(q)));
      std::reverse(path.nodes.begin(), path.nodes.end());
      escaped = true;
      break;
    }
    if (!escaped) {
      result.pass = false;
      result.failing_cell = j;
      result.paths.clear();
      return result;
    }
    result.paths.push_back(std::move(path));
  }
  return result;
}

CellPartition pixel_lattice(int rows, int cols, double side, double d0) {
  if (rows < 1 || cols < 1 || side <= 0)
    throw InvalidInput("lattice needs positive dimensions");
  CellPartition part;
  part.d0 = d0;
  double w = cols * side, h = rows * side;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      Vec lo(-w / 2 + c * side, h / 2 - (r + 1) * side);
      Vec hi(-w / 2 + (c + 1) * side, h / 2 - r * side);
      part.cells.push_back(Polytope::axis_box(lo, hi));
    }
  return part;
}

NestedResult check_nested(const NestedFamily& fam) {
  NestedResult res;
  res.pass = true;
  if (fam.m0 <= 0) throw InvalidInput("nesting margin m0 must be positive");
  const int ns = static_cast<int>(fam.shells.size());
  for (int j = 0; j + 1 < ns; ++j) {
    if (!fam.shells[j + 1]) continue;  // empty tail is fine
    if (!fam.shells[j]) {
      res.pass = false;
      res.failing_shell = j;
      return res;
    }
    for (const Vec& v : fam.shells[j + 1]->vertices())
      if (fam.shells[j]->depth(v) < fam.m0 - 1e-12) {
        res.pass = false;
        res.failing_shell = j;
        return res;
      }
  }
  return res;
}

}  // namespace polyscat

#include "polyapprox/polytope.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

namespace polyapprox {

namespace {

constexpr int kInternalBoxTag = -3;
constexpr double kInternalBoxHalf = 1e4;

// Orthonormal basis (e1, e2) of the plane orthogonal to n with e1 x e2 = n.
std::pair<Vec, Vec> plane_basis(const Vec& n) {
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(n[i]) < std::abs(n[k])) k = i;
  const Vec e1 = normalized(cross(n, unit_axis(k)));
  return {e1, cross(n, e1)};
}

Vec segment_nearest(const Vec& a, const Vec& b, const Vec& x) {
  const Vec ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(x - a, ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

// Canonical intersection of segment [p, q] with the plane; p and q are
// ordered lexicographically so shared edges produce bitwise-identical points.
Vec edge_cut(Vec p, double sp, Vec q, double sq) {
  if (lex_less(q, p)) {
    std::swap(p, q);
    std::swap(sp, sq);
  }
  const double t = sp / (sp - sq);
  return p + t * (q - p);
}

// Replaces x by the intersection point of its best-conditioned set of
// incident facet planes when that point is within tolerance of x.
void polish_vertex(Vec& x, const std::vector<Halfspace>& planes) {
  if (planes.size() < 2) return;
  Vec best_x = x;
  double best_det = 0.0;
  if (planes[0].normal[2] == 0.0 && planes.size() == 2) {
    const Vec& a = planes[0].normal;
    const Vec& b = planes[1].normal;
    const double det = a[0] * b[1] - a[1] * b[0];
    if (std::abs(det) < 1e-8) return;
    best_x = Vec{(planes[0].offset * b[1] - planes[1].offset * a[1]) / det,
                 (a[0] * planes[1].offset - b[0] * planes[0].offset) / det};
    best_det = std::abs(det);
  } else {
    const std::size_t m = std::min<std::size_t>(planes.size(), 8);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        for (std::size_t k = j + 1; k < m; ++k) {
          const Vec& a = planes[i].normal;
          const Vec& b = planes[j].normal;
          const Vec& c = planes[k].normal;
          const Vec bc = cross(b, c);
          const double det = dot(a, bc);
          if (std::abs(det) <= best_det) continue;
          best_det = std::abs(det);
          best_x = (planes[i].offset * bc + planes[j].offset * cross(c, a) +
                    planes[k].offset * cross(a, b)) /
                   det;
        }
  }
  if (best_det > 1e-8 && dist(best_x, x) <= 1e3 * kAbsTol) x = best_x;
}

enum class ClipResult { kRedundant, kCut, kEmpty };

// Incremental clipping state for a bounded convex polytope.
class Clipper {
 public:
  explicit Clipper(int dim) : dim_(dim) {}

  static Clipper from_box(int dim, const Box& box, int tag) {
    Clipper c(dim);
    if (dim == 1) {
      c.lo_ = box.lo[0];
      c.hi_ = box.hi[0];
      c.lo_plane_ = {Vec{-1.0}, -box.lo[0]};
      c.hi_plane_ = {Vec{1.0}, box.hi[0]};
      c.lo_tag_ = c.hi_tag_ = tag;
    } else if (dim == 2) {
      const Vec a{box.lo[0], box.lo[1]}, b{box.hi[0], box.lo[1]}, cc{box.hi[0], box.hi[1]},
          d{box.lo[0], box.hi[1]};
      c.pts_ = {a, b, cc, d};
      c.edge_planes_ = {{Vec{0, -1}, -box.lo[1]},
                        {Vec{1, 0}, box.hi[0]},
                        {Vec{0, 1}, box.hi[1]},
                        {Vec{-1, 0}, -box.lo[0]}};
      c.edge_tags_ = {tag, tag, tag, tag};
    } else {
      auto corner = [&](int i, int j, int k) {
        return Vec{i ? box.hi[0] : box.lo[0], j ? box.hi[1] : box.lo[1],
                   k ? box.hi[2] : box.lo[2]};
      };
      // Loops counter-clockwise seen from outside.
      c.faces_.push_back({tag, {Vec{-1, 0, 0}, -box.lo[0]},
                          {corner(0, 0, 0), corner(0, 0, 1), corner(0, 1, 1), corner(0, 1, 0)}});
      c.faces_.push_back({tag, {Vec{1, 0, 0}, box.hi[0]},
                          {corner(1, 0, 0), corner(1, 1, 0), corner(1, 1, 1), corner(1, 0, 1)}});
      c.faces_.push_back({tag, {Vec{0, -1, 0}, -box.lo[1]},
                          {corner(0, 0, 0), corner(1, 0, 0), corner(1, 0, 1), corner(0, 0, 1)}});
      c.faces_.push_back({tag, {Vec{0, 1, 0}, box.hi[1]},
                          {corner(0, 1, 0), corner(0, 1, 1), corner(1, 1, 1), corner(1, 1, 0)}});
      c.faces_.push_back({tag, {Vec{0, 0, -1}, -box.lo[2]},
                          {corner(0, 0, 0), corner(0, 1, 0), corner(1, 1, 0), corner(1, 0, 0)}});
      c.faces_.push_back({tag, {Vec{0, 0, 1}, box.hi[2]},
                          {corner(0, 0, 1), corner(1, 0, 1), corner(1, 1, 1), corner(0, 1, 1)}});
    }
    return c;
  }

  // In 3D, faces lying entirely outside *outside_of are left out.
  static Clipper from_polytope(const Polytope& p, const Halfspace* outside_of = nullptr) {
    Clipper c(p.dim());
    const auto& f = p.facets();
    const auto& fv = p.facet_vertices();
    const auto& v = p.vertices();
    if (p.dim() == 1) {
      for (std::size_t k = 0; k < f.size(); ++k) {
        if (f[k].normal[0] < 0) {
          c.lo_ = v[static_cast<std::size_t>(fv[k][0])][0];
          c.lo_plane_ = f[k];
          c.lo_tag_ = p.facet_source()[k];
        } else {
          c.hi_ = v[static_cast<std::size_t>(fv[k][0])][0];
          c.hi_plane_ = f[k];
          c.hi_tag_ = p.facet_source()[k];
        }
      }
    } else if (p.dim() == 2) {
      // Follow edges a -> b around the polygon.
      std::vector<int> next(v.size(), -1), edge_of(v.size(), -1);
      for (std::size_t k = 0; k < f.size(); ++k) {
        next[static_cast<std::size_t>(fv[k][0])] = fv[k][1];
        edge_of[static_cast<std::size_t>(fv[k][0])] = static_cast<int>(k);
      }
      int cur = fv[0][0];
      for (std::size_t n = 0; n < f.size(); ++n) {
        const auto e = static_cast<std::size_t>(edge_of[static_cast<std::size_t>(cur)]);
        c.pts_.push_back(v[static_cast<std::size_t>(cur)]);
        c.edge_planes_.push_back(f[e]);
        c.edge_tags_.push_back(p.facet_source()[e]);
        cur = next[static_cast<std::size_t>(cur)];
      }
    } else {
      std::vector<char> out;
      if (outside_of) {
        out.resize(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = outside_of->signed_distance(v[i]) > kAbsTol;
      }
      for (std::size_t k = 0; k < f.size(); ++k) {
        if (outside_of && std::all_of(fv[k].begin(), fv[k].end(),
                                      [&](int i) { return out[static_cast<std::size_t>(i)] != 0; }))
          continue;
        Face face{p.facet_source()[k], f[k], {}};
        for (int i : fv[k]) face.loop.push_back(v[static_cast<std::size_t>(i)]);
        c.faces_.push_back(std::move(face));
      }
    }
    return c;
  }

  std::size_t face_count() const { return faces_.size(); }

  ClipResult clip(const Halfspace& h, int tag) {
    switch (dim_) {
      case 1: return clip1(h, tag);
      case 2: return clip2(h, tag);
      default: return clip3(h, tag);
    }
  }

  Polytope build() const {
    if (dim_ == 1) {
      std::vector<Vec> verts{Vec{lo_}, Vec{hi_}};
      return Polytope(1, {lo_plane_, hi_plane_}, {lo_tag_, hi_tag_}, std::move(verts),
                      {{0}, {1}});
    }
    if (dim_ == 2) {
      const int n = static_cast<int>(pts_.size());
      std::vector<std::vector<int>> fv;
      for (int k = 0; k < n; ++k) fv.push_back({k, (k + 1) % n});
      std::vector<Vec> verts = pts_;
      for (int k = 0; k < n; ++k)
        polish_vertex(verts[static_cast<std::size_t>(k)],
                      {edge_planes_[static_cast<std::size_t>((k + n - 1) % n)],
                       edge_planes_[static_cast<std::size_t>(k)]});
      return Polytope(2, edge_planes_, edge_tags_, std::move(verts), std::move(fv));
    }
    std::map<std::array<double, 3>, int> index;
    std::vector<Vec> verts;
    std::vector<Halfspace> planes;
    std::vector<int> tags;
    std::vector<std::vector<int>> fv;
    for (const Face& face : faces_) {
      std::vector<int> loop;
      for (const Vec& p : face.loop) {
        auto [it, inserted] = index.try_emplace(p.c, static_cast<int>(verts.size()));
        if (inserted) verts.push_back(p);
        if (loop.empty() || loop.back() != it->second) loop.push_back(it->second);
      }
      while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
      if (loop.size() < 3) continue;
      planes.push_back(face.plane);
      tags.push_back(face.tag);
      fv.push_back(std::move(loop));
    }
    std::vector<std::vector<Halfspace>> incident(verts.size());
    for (std::size_t f = 0; f < fv.size(); ++f)
      for (int i : fv[f]) incident[static_cast<std::size_t>(i)].push_back(planes[f]);
    for (std::size_t i = 0; i < verts.size(); ++i) polish_vertex(verts[i], incident[i]);
    return Polytope(3, std::move(planes), std::move(tags), std::move(verts), std::move(fv));
  }

 private:
  struct Face {
    int tag;
    Halfspace plane;
    std::vector<Vec> loop;
  };

  ClipResult clip1(const Halfspace& h, int tag) {
    const double s_lo = h.signed_distance(Vec{lo_});
    const double s_hi = h.signed_distance(Vec{hi_});
    if (s_lo <= kAbsTol && s_hi <= kAbsTol) return ClipResult::kRedundant;
    if (s_lo > kAbsTol && s_hi > kAbsTol) return ClipResult::kEmpty;
    const double x = h.offset / h.normal[0];
    if (h.normal[0] > 0) {
      hi_ = x;
      hi_plane_ = h;
      hi_tag_ = tag;
    } else {
      lo_ = x;
      lo_plane_ = h;
      lo_tag_ = tag;
    }
    return hi_ - lo_ > 0.0 ? ClipResult::kCut : ClipResult::kEmpty;
  }

  ClipResult clip2(const Halfspace& h, int tag) {
    const std::size_t n = pts_.size();
    std::vector<double> s(n);
    bool any_out = false, any_in = false;
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = h.signed_distance(pts_[k]);
      any_out |= s[k] > kAbsTol;
      any_in |= s[k] <= kAbsTol;
    }
    if (!any_out) return ClipResult::kRedundant;
    if (!any_in) return ClipResult::kEmpty;
    std::vector<Vec> pts;
    std::vector<Halfspace> planes;
    std::vector<int> tags;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t m = (k + 1) % n;
      const double sp = s[k], sq = s[m];
      if (sp <= kAbsTol) {
        pts.push_back(pts_[k]);
        if (sq > kAbsTol && !(sp < -kAbsTol)) {
          planes.push_back(h);
          tags.push_back(tag);
        } else {
          planes.push_back(edge_planes_[k]);
          tags.push_back(edge_tags_[k]);
        }
      }
      if ((sp < -kAbsTol && sq > kAbsTol) || (sp > kAbsTol && sq < -kAbsTol)) {
        pts.push_back(edge_cut(pts_[k], sp, pts_[m], sq));
        if (sp < -kAbsTol) {  // leaving
          planes.push_back(h);
          tags.push_back(tag);
        } else {
          planes.push_back(edge_planes_[k]);
          tags.push_back(edge_tags_[k]);
        }
      }
    }
    // Drop zero-length edges.
    std::vector<Vec> out_pts;
    std::vector<Halfspace> out_planes;
    std::vector<int> out_tags;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const std::size_t m = (k + 1) % pts.size();
      if (dist(pts[k], pts[m]) <= 1e-14) continue;
      out_pts.push_back(pts[k]);
      out_planes.push_back(planes[k]);
      out_tags.push_back(tags[k]);
    }
    if (out_pts.size() < 3) return ClipResult::kEmpty;
    pts_ = std::move(out_pts);
    edge_planes_ = std::move(out_planes);
    edge_tags_ = std::move(out_tags);
    return ClipResult::kCut;
  }

  ClipResult clip3(const Halfspace& h, int tag) {
    bool any_out = false, any_in = false;
    std::vector<char> touched(faces_.size(), 0);
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      for (const Vec& p : faces_[f].loop) {
        const double s = h.signed_distance(p);
        if (s > kAbsTol) {
          any_out = true;
          touched[f] = 1;
        } else {
          any_in = true;
        }
      }
    }
    if (!any_out) return ClipResult::kRedundant;
    if (!any_in) return ClipResult::kEmpty;
    std::vector<Vec> cut_points;
    std::vector<Face> kept;
    kept.reserve(faces_.size() + 1);
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      Face& face = faces_[f];
      if (!touched[f]) {
        for (const Vec& p : face.loop)
          if (std::abs(h.signed_distance(p)) <= kAbsTol) cut_points.push_back(p);
        kept.push_back(std::move(face));
        continue;
      }
      const std::size_t n = face.loop.size();
      std::vector<double> s(n);
      for (std::size_t k = 0; k < n; ++k) s[k] = h.signed_distance(face.loop[k]);
      std::vector<Vec> loop;
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t m = (k + 1) % n;
        if (s[k] <= kAbsTol) {
          loop.push_back(face.loop[k]);
          if (s[k] >= -kAbsTol) cut_points.push_back(face.loop[k]);
        }
        if ((s[k] < -kAbsTol && s[m] > kAbsTol) || (s[k] > kAbsTol && s[m] < -kAbsTol)) {
          const Vec x = edge_cut(face.loop[k], s[k], face.loop[m], s[m]);
          loop.push_back(x);
          cut_points.push_back(x);
        }
      }
      std::vector<Vec> clean;
      for (const Vec& p : loop)
        if (clean.empty() || !(clean.back() == p)) clean.push_back(p);
      while (clean.size() > 1 && clean.front() == clean.back()) clean.pop_back();
      if (clean.size() >= 3) {
        face.loop = std::move(clean);
        kept.push_back(std::move(face));
      }
    }
    faces_ = std::move(kept);
    // New face: convex hull of the cut points within the plane.
    const auto [e1, e2] = plane_basis(h.normal);
    std::vector<Vec> proj;
    proj.reserve(cut_points.size());
    for (const Vec& p : cut_points) proj.push_back(Vec{dot(p, e1), dot(p, e2)});
    const std::vector<int> hull = detail::hull_2d(proj);
    if (hull.size() >= 3) {
      Face face{tag, h, {}};
      for (int i : hull) face.loop.push_back(cut_points[static_cast<std::size_t>(i)]);
      faces_.push_back(std::move(face));
    }
    if (faces_.size() < 4) return ClipResult::kEmpty;
    return ClipResult::kCut;
  }

  int dim_;
  // 1D state.
  double lo_ = 0.0, hi_ = 0.0;
  Halfspace lo_plane_, hi_plane_;
  int lo_tag_ = kBoxTag, hi_tag_ = kBoxTag;
  // 2D state: counter-clockwise loop; edge k runs from pts_[k] to pts_[k+1].
  std::vector<Vec> pts_;
  std::vector<Halfspace> edge_planes_;
  std::vector<int> edge_tags_;
  // 3D state.
  std::vector<Face> faces_;
};

double tetra_volume6(const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
  return dot(b - a, cross(c - a, d - a));
}

Polytope finish(Polytope p, const char* what) {
  if (p.vertices().size() < static_cast<std::size_t>(p.dim() + 1) ||
      p.facets().size() < static_cast<std::size_t>(p.dim() + 1) || !(p.volume() > 0.0))
    throw GeometryError(std::string(what) + ": empty interior");
  for (int src : p.facet_source())
    if (src == kInternalBoxTag) throw GeometryError(std::string(what) + ": unbounded");
  return p;
}

// Empty when the dual hull is numerically inconsistent: a face not strictly
// in front of the centre, or a primal vertex outside the bounding box.
std::optional<Polytope> intersect_via_dual_hull(std::span<const Halfspace> hs, const std::vector<int>& tags,
                                                const Vec& c, const Box& box) {
  std::vector<Vec> dual(hs.size());
  double scale = 0.0;
  for (std::size_t k = 0; k < hs.size(); ++k) {
    const double slack = hs[k].offset - dot(hs[k].normal, c);
    if (!(slack > 1e-14))
      throw GeometryError("halfspace_intersection: interior point is not strictly interior");
    dual[k] = hs[k].normal / slack;
    scale = std::max(scale, norm(dual[k]));
  }
  const double reach = 1e-6 * (1.0 + dist(box.lo, box.hi));
  const auto inside_box = [&](const Vec& x) {
    for (int i = 0; i < 3; ++i)
      if (!(x[i] >= box.lo[i] - reach && x[i] <= box.hi[i] + reach)) return false;
    return true;
  };
  // Primal vertex of each dual triangle, with a conditioning score.
  std::vector<std::array<int, 3>> tris;
  std::vector<Vec> tri_point, tri_normal;
  std::vector<double> quality;
  bool valid = false;
  for (double tol : {1e-11, 1e-9}) {
    tris = detail::hull_3d(dual, tol * scale);
    const std::size_t nt = tris.size();
    tri_point.assign(nt, Vec{});
    tri_normal.assign(nt, Vec{});
    quality.assign(nt, 0.0);
    valid = true;
    for (std::size_t t = 0; t < nt && valid; ++t) {
      const Vec& a = dual[static_cast<std::size_t>(tris[t][0])];
      const Vec& b = dual[static_cast<std::size_t>(tris[t][1])];
      const Vec& d = dual[static_cast<std::size_t>(tris[t][2])];
      const Vec n = cross(b - a, d - a);
      const double edge = std::max({dot(b - a, b - a), dot(d - b, d - b), dot(a - d, a - d)});
      tri_normal[t] = normalized(n);
      tri_point[t] = c + n / dot(n, a);
      quality[t] = norm(n) / edge;
      valid = dot(tri_normal[t], a) > tol * scale && inside_box(tri_point[t]);
    }
    if (valid) break;
  }
  if (!valid) return std::nullopt;
  const std::size_t nt = tris.size();
  // Edge-adjacent triangles that are coplanar in the dual share a primal
  // vertex; merge them and keep the best-conditioned point of each group.
  std::vector<int> parent(nt);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x)
      x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  std::unordered_map<std::uint64_t, int> edge_owner;
  edge_owner.reserve(3 * nt);
  const auto edge_key = [&](int u, int v) { return static_cast<std::uint64_t>(u) * hs.size() + static_cast<std::uint64_t>(v); };
  for (std::size_t t = 0; t < nt; ++t)
    for (int i = 0; i < 3; ++i) edge_owner.emplace(edge_key(tris[t][i], tris[t][(i + 1) % 3]), static_cast<int>(t));
  const double flat = 1e-11 * scale;
  for (std::size_t t = 0; t < nt; ++t)
    for (int i = 0; i < 3; ++i) {
      const auto it = edge_owner.find(edge_key(tris[t][(i + 1) % 3], tris[t][i]));
      if (it == edge_owner.end() || it->second < static_cast<int>(t)) continue;
      const auto o = static_cast<std::size_t>(it->second);
      int apex = -1;
      for (int k : tris[o])
        if (k != tris[t][i] && k != tris[t][(i + 1) % 3]) apex = k;
      const Vec& a = dual[static_cast<std::size_t>(tris[t][0])];
      const bool coplanar = std::abs(dot(tri_normal[t], dual[static_cast<std::size_t>(apex)] - a)) <= flat;
      if (coplanar || dist(tri_point[t], tri_point[o]) <= 1e-10) {
        const int rt = find(static_cast<int>(t)), ro = find(static_cast<int>(o));
        if (rt != ro) parent[static_cast<std::size_t>(std::max(rt, ro))] = std::min(rt, ro);
      }
    }
  std::vector<int> best(nt, -1);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto r = static_cast<std::size_t>(find(static_cast<int>(t)));
    if (best[r] < 0 || quality[t] > quality[static_cast<std::size_t>(best[r])]) best[r] = static_cast<int>(t);
  }
  std::vector<Vec> verts;
  std::vector<int> group_vertex(nt, -1), tri_vertex(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto r = static_cast<std::size_t>(find(static_cast<int>(t)));
    if (group_vertex[r] < 0) {
      group_vertex[r] = static_cast<int>(verts.size());
      verts.push_back(tri_point[static_cast<std::size_t>(best[r])]);
    }
    tri_vertex[t] = group_vertex[r];
  }
  // Facet loops: triangles around each dual vertex, ordered by adjacency.
  std::vector<std::vector<int>> around(hs.size());
  for (std::size_t t = 0; t < tris.size(); ++t)
    for (int k : tris[t]) around[static_cast<std::size_t>(k)].push_back(static_cast<int>(t));
  std::vector<Halfspace> planes;
  std::vector<int> facet_tags;
  std::vector<std::vector<int>> fv;
  for (std::size_t k = 0; k < hs.size(); ++k) {
    auto& ts = around[k];
    if (ts.size() < 3) continue;
    // In triangle (k, a, b) (rotated so k first), the next triangle shares edge (k, b).
    std::map<int, int> next_by_a;
    std::vector<std::pair<int, int>> ab(ts.size());
    for (std::size_t m = 0; m < ts.size(); ++m) {
      auto tri = tris[static_cast<std::size_t>(ts[m])];
      while (tri[0] != static_cast<int>(k)) std::rotate(tri.begin(), tri.begin() + 1, tri.end());
      ab[m] = {tri[1], tri[2]};
      next_by_a[tri[1]] = static_cast<int>(m);
    }
    std::vector<int> loop;
    std::size_t m = 0;
    for (std::size_t step = 0; step < ts.size(); ++step) {
      const int v = tri_vertex[static_cast<std::size_t>(ts[m])];
      if (loop.empty() || loop.back() != v) loop.push_back(v);
      auto it = next_by_a.find(ab[m].second);
      if (it == next_by_a.end()) break;
      m = static_cast<std::size_t>(it->second);
    }
    while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
    if (loop.size() < 3) continue;
    // Orient counter-clockwise about the outward normal.
    Vec area;
    for (std::size_t i = 1; i + 1 < loop.size(); ++i)
      area += cross(verts[static_cast<std::size_t>(loop[i])] - verts[static_cast<std::size_t>(loop[0])],
                    verts[static_cast<std::size_t>(loop[i + 1])] - verts[static_cast<std::size_t>(loop[0])]);
    if (dot(area, hs[k].normal) < 0) std::reverse(loop.begin(), loop.end());
    planes.push_back(hs[k]);
    facet_tags.push_back(tags[k]);
    fv.push_back(std::move(loop));
  }
  return Polytope(3, std::move(planes), std::move(facet_tags), std::move(verts), std::move(fv));
}

}  // namespace

// ---------------------------------------------------------------------------
// Polytope

Polytope::Polytope(int dim, std::vector<Halfspace> facets, std::vector<int> facet_source,
                   std::vector<Vec> vertices, std::vector<std::vector<int>> facet_vertices)
    : dim_(dim),
      facets_(std::move(facets)),
      facet_source_(std::move(facet_source)),
      vertices_(std::move(vertices)),
      facet_vertices_(std::move(facet_vertices)) {}

std::size_t Polytope::facet_count(bool include_box) const {
  if (include_box) return facets_.size();
  return static_cast<std::size_t>(
      std::count_if(facet_source_.begin(), facet_source_.end(), [](int s) { return s != kBoxTag; }));
}

double Polytope::support(const Vec& u) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec& v : vertices_) best = std::max(best, dot(u, v));
  if (vertices_.empty()) throw GeometryError("support: empty polytope");
  return best;
}

int Polytope::support_vertex(const Vec& u) const {
  int best = -1;
  double val = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const double s = dot(u, vertices_[i]);
    if (s > val) {
      val = s;
      best = static_cast<int>(i);
    }
  }
  if (best < 0) throw GeometryError("support: empty polytope");
  return best;
}

double Polytope::max_violation(const Vec& x) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const Halfspace& h : facets_) worst = std::max(worst, h.signed_distance(x));
  return worst;
}

bool Polytope::contains(const Vec& x, double tol) const { return max_violation(x) <= tol; }

double Polytope::volume() const {
  if (vertices_.empty()) return 0.0;
  if (dim_ == 1) {
    double lo = vertices_[0][0], hi = lo;
    for (const Vec& v : vertices_) {
      lo = std::min(lo, v[0]);
      hi = std::max(hi, v[0]);
    }
    return hi - lo;
  }
  const Vec ref = vertex_mean();
  double total = 0.0;
  if (dim_ == 2) {
    for (const auto& e : facet_vertices_) {
      const Vec a = vertices_[static_cast<std::size_t>(e[0])] - ref;
      const Vec b = vertices_[static_cast<std::size_t>(e[1])] - ref;
      total += a[0] * b[1] - a[1] * b[0];
    }
    return total / 2.0;
  }
  for (const auto& loop : facet_vertices_) {
    const Vec& a = vertices_[static_cast<std::size_t>(loop[0])];
    for (std::size_t i = 1; i + 1 < loop.size(); ++i)
      total += tetra_volume6(ref, a, vertices_[static_cast<std::size_t>(loop[i])],
                             vertices_[static_cast<std::size_t>(loop[i + 1])]);
  }
  return total / 6.0;
}

Vec Polytope::vertex_mean() const {
  Vec m;
  for (const Vec& v : vertices_) m += v;
  return vertices_.empty() ? m : m / static_cast<double>(vertices_.size());
}

Vec Polytope::centroid() const {
  const Vec ref = vertex_mean();
  if (dim_ == 1) return ref;
  Vec acc;
  double total = 0.0;
  if (dim_ == 2) {
    for (const auto& e : facet_vertices_) {
      const Vec a = vertices_[static_cast<std::size_t>(e[0])];
      const Vec b = vertices_[static_cast<std::size_t>(e[1])];
      const double w = (a - ref)[0] * (b - ref)[1] - (a - ref)[1] * (b - ref)[0];
      total += w;
      acc += w * (ref + a + b) / 3.0;
    }
  } else {
    for (const auto& loop : facet_vertices_) {
      const Vec& a = vertices_[static_cast<std::size_t>(loop[0])];
      for (std::size_t i = 1; i + 1 < loop.size(); ++i) {
        const Vec& b = vertices_[static_cast<std::size_t>(loop[i])];
        const Vec& c = vertices_[static_cast<std::size_t>(loop[i + 1])];
        const double w = tetra_volume6(ref, a, b, c);
        total += w;
        acc += w * (ref + a + b + c) / 4.0;
      }
    }
  }
  return total > 0.0 ? acc / total : ref;
}

Box Polytope::bounding_box() const {
  Box b;
  for (int i = 0; i < dim_; ++i) {
    b.lo[i] = std::numeric_limits<double>::infinity();
    b.hi[i] = -std::numeric_limits<double>::infinity();
  }
  for (const Vec& v : vertices_)
    for (int i = 0; i < dim_; ++i) {
      b.lo[i] = std::min(b.lo[i], v[i]);
      b.hi[i] = std::max(b.hi[i], v[i]);
    }
  return b;
}

double Polytope::diameter() const {
  double best = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j)
      best = std::max(best, dist(vertices_[i], vertices_[j]));
  return best;
}

double Polytope::surface_area() const {
  if (dim_ == 1) return 2.0;
  double total = 0.0;
  if (dim_ == 2) {
    for (const auto& e : facet_vertices_)
      total += dist(vertices_[static_cast<std::size_t>(e[0])], vertices_[static_cast<std::size_t>(e[1])]);
    return total;
  }
  for (const auto& loop : facet_vertices_) {
    Vec area;
    const Vec& a = vertices_[static_cast<std::size_t>(loop[0])];
    for (std::size_t i = 1; i + 1 < loop.size(); ++i)
      area += cross(vertices_[static_cast<std::size_t>(loop[i])] - a,
                    vertices_[static_cast<std::size_t>(loop[i + 1])] - a);
    total += norm(area) / 2.0;
  }
  return total;
}

Vec Polytope::nearest_point(const Vec& x) const {
  if (contains(x, 0.0)) return x;
  if (dim_ == 1) {
    const Box b = bounding_box();
    return Vec{std::clamp(x[0], b.lo[0], b.hi[0])};
  }
  Vec best = vertices_.front();
  double best_d = dist(best, x);
  auto consider = [&](const Vec& p) {
    const double d = dist(p, x);
    if (d < best_d) {
      best_d = d;
      best = p;
    }
  };
  if (dim_ == 2) {
    for (const auto& e : facet_vertices_)
      consider(segment_nearest(vertices_[static_cast<std::size_t>(e[0])],
                               vertices_[static_cast<std::size_t>(e[1])], x));
    return best;
  }
  for (std::size_t f = 0; f < facets_.size(); ++f) {
    const Halfspace& h = facets_[f];
    const double s = h.signed_distance(x);
    if (s <= 0.0) continue;
    const Vec proj = x - s * h.normal;
    const auto& loop = facet_vertices_[f];
    bool inside = true;
    for (std::size_t i = 0; i < loop.size() && inside; ++i) {
      const Vec& a = vertices_[static_cast<std::size_t>(loop[i])];
      const Vec& b = vertices_[static_cast<std::size_t>(loop[(i + 1) % loop.size()])];
      if (dot(cross(b - a, proj - a), h.normal) < 0.0) inside = false;
    }
    if (inside) {
      consider(proj);
      continue;
    }
    for (std::size_t i = 0; i < loop.size(); ++i)
      consider(segment_nearest(vertices_[static_cast<std::size_t>(loop[i])],
                               vertices_[static_cast<std::size_t>(loop[(i + 1) % loop.size()])], x));
  }
  return best;
}

std::vector<std::pair<int, int>> Polytope::edges() const {
  std::vector<std::pair<int, int>> out;
  if (dim_ == 2) {
    for (const auto& e : facet_vertices_) out.emplace_back(e[0], e[1]);
    return out;
  }
  if (dim_ == 3) {
    for (const auto& loop : facet_vertices_)
      for (std::size_t i = 0; i < loop.size(); ++i) {
        const int a = loop[i], b = loop[(i + 1) % loop.size()];
        if (a < b) out.emplace_back(a, b);
      }
  }
  return out;
}

double Polytope::min_width() const {
  auto width = [&](const Vec& u) { return support(u) + support(-u); };
  double best = std::numeric_limits<double>::infinity();
  for (const Halfspace& h : facets_) best = std::min(best, width(h.normal));
  if (dim_ == 3) {
    const auto es = edges();
    if (es.size() <= 400) {
      for (std::size_t i = 0; i < es.size(); ++i) {
        const Vec di = vertices_[static_cast<std::size_t>(es[i].second)] -
                       vertices_[static_cast<std::size_t>(es[i].first)];
        for (std::size_t j = i + 1; j < es.size(); ++j) {
          const Vec dj = vertices_[static_cast<std::size_t>(es[j].second)] -
                         vertices_[static_cast<std::size_t>(es[j].first)];
          const Vec n = cross(di, dj);
          const double len = norm(n);
          if (len > 1e-12 * norm(di) * norm(dj)) best = std::min(best, width(n / len));
        }
      }
    }
  }
  return best;
}

Polytope Polytope::translated(const Vec& t) const {
  std::vector<Halfspace> f = facets_;
  for (Halfspace& h : f) h.offset += dot(h.normal, t);
  std::vector<Vec> v = vertices_;
  for (Vec& p : v) p += t;
  return Polytope(dim_, std::move(f), facet_source_, std::move(v), facet_vertices_);
}

Polytope Polytope::scaled(double s, const Vec& center) const {
  std::vector<Halfspace> f = facets_;
  for (Halfspace& h : f) h.offset = dot(h.normal, center) + s * (h.offset - dot(h.normal, center));
  std::vector<Vec> v = vertices_;
  for (Vec& p : v) p = center + s * (p - center);
  return Polytope(dim_, std::move(f), facet_source_, std::move(v), facet_vertices_);
}

Polytope Polytope::reflected(const Vec& center) const {
  // <n, 2c - y> <= b  <=>  <-n, y> <= b - 2<n, c>
  std::vector<Halfspace> f = facets_;
  for (Halfspace& h : f) {
    h.offset -= 2.0 * dot(h.normal, center);
    h.normal = -h.normal;
  }
  std::vector<Vec> v = vertices_;
  for (Vec& p : v) p = 2.0 * center - p;
  auto fv = facet_vertices_;
  // Point reflection is a rotation in 2D but flips orientation in 3D.
  if (dim_ == 3)
    for (auto& loop : fv) std::reverse(loop.begin(), loop.end());
  return Polytope(dim_, std::move(f), facet_source_, std::move(v), std::move(fv));
}

double Polytope::consistency_residual() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const Vec& v : vertices_) worst = std::max(worst, max_violation(v));
  return worst;
}

// ---------------------------------------------------------------------------
// Construction

Polytope box_polytope(int dim, const Box& box) {
  return Clipper::from_box(dim, box, kBoxTag).build();
}

Polytope halfspace_intersection(int dim, std::span<const Halfspace> halfspaces,
                                const IntersectionOptions& options) {
  if (dim < 1 || dim > 3) throw GeometryError("halfspace_intersection: dimension must be 1..3");
  for (const Halfspace& h : halfspaces)
    if (std::abs(norm(h.normal) - 1.0) > 1e-12 || !finite(h.normal) || !std::isfinite(h.offset))
      throw GeometryError("halfspace_intersection: normals must be finite unit vectors");

  if (dim == 3 && options.interior) {
    std::vector<Halfspace> hs(halfspaces.begin(), halfspaces.end());
    std::vector<int> tags(hs.size());
    std::iota(tags.begin(), tags.end(), 0);
    const Box box = options.bounds.value_or(Box::cube(3, kInternalBoxHalf));
    const int box_tag = options.bounds ? kBoxTag : kInternalBoxTag;
    for (int i = 0; i < 3; ++i) {
      hs.push_back({unit_axis(i), box.hi[i]});
      tags.push_back(box_tag);
      hs.push_back({-unit_axis(i), -box.lo[i]});
      tags.push_back(box_tag);
    }
    if (auto p = intersect_via_dual_hull(hs, tags, *options.interior, box))
      return finish(std::move(*p), "halfspace_intersection");
  }

  Clipper clipper = options.bounds
                        ? Clipper::from_box(dim, *options.bounds, kBoxTag)
                        : Clipper::from_box(dim, Box::cube(dim, kInternalBoxHalf), kInternalBoxTag);
  for (std::size_t k = 0; k < halfspaces.size(); ++k)
    if (clipper.clip(halfspaces[k], static_cast<int>(k)) == ClipResult::kEmpty)
      throw GeometryError("halfspace_intersection: empty interior");
  return finish(clipper.build(), "halfspace_intersection");
}

std::optional<Polytope> try_clip(const Polytope& p, std::span<const Halfspace> halfspaces,
                                 int tag_base) {
  int base = tag_base;
  if (tag_base == -2) {
    base = 0;
    for (int s : p.facet_source()) base = std::max(base, s + 1);
  }
  // A single cut can skip faces it removes entirely.
  const bool single = p.dim() == 3 && halfspaces.size() == 1;
  Clipper clipper = Clipper::from_polytope(p, single ? &halfspaces[0] : nullptr);
  if (single && clipper.face_count() == 0) return std::nullopt;
  for (std::size_t k = 0; k < halfspaces.size(); ++k)
    if (clipper.clip(halfspaces[k], base + static_cast<int>(k)) == ClipResult::kEmpty)
      return std::nullopt;
  Polytope out = clipper.build();
  if (out.vertices().size() < static_cast<std::size_t>(out.dim() + 1) || !(out.volume() > 0.0))
    return std::nullopt;
  return out;
}

Polytope clip(const Polytope& p, std::span<const Halfspace> halfspaces, int tag_base) {
  auto out = try_clip(p, halfspaces, tag_base);
  if (!out) throw GeometryError("clip: empty interior");
  return *out;
}

Polytope convex_hull(int dim, std::span<const Vec> points) {
  if (points.size() < static_cast<std::size_t>(dim + 1))
    throw GeometryError("convex_hull: not enough points");
  if (dim == 1) {
    double lo = points[0][0], hi = lo;
    for (const Vec& p : points) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    if (!(hi > lo)) throw GeometryError("convex_hull: degenerate");
    return Polytope(1, {{Vec{-1.0}, -lo}, {Vec{1.0}, hi}}, {0, 1}, {Vec{lo}, Vec{hi}}, {{0}, {1}});
  }
  if (dim == 2) {
    const std::vector<int> idx = detail::hull_2d(points);
    if (idx.size() < 3) throw GeometryError("convex_hull: degenerate");
    std::vector<Vec> verts;
    for (int i : idx) verts.push_back(points[static_cast<std::size_t>(i)]);
    std::vector<Halfspace> facets;
    std::vector<int> src;
    std::vector<std::vector<int>> fv;
    const int n = static_cast<int>(verts.size());
    for (int k = 0; k < n; ++k) {
      const Vec& a = verts[static_cast<std::size_t>(k)];
      const Vec& b = verts[static_cast<std::size_t>((k + 1) % n)];
      const Vec w{b[1] - a[1], a[0] - b[0]};
      facets.push_back(Halfspace::from_raw(w, dot(w, a)));
      src.push_back(k);
      fv.push_back({k, (k + 1) % n});
    }
    return Polytope(2, std::move(facets), std::move(src), std::move(verts), std::move(fv));
  }
  double scale = 0.0;
  for (const Vec& p : points) scale = std::max(scale, norm(p));
  const auto tris = detail::hull_3d(points, 1e-12 * std::max(scale, 1.0));
  // Group coplanar triangles into facets.
  struct Plane {
    Vec n;
    double off;
  };
  std::vector<Plane> tri_plane(tris.size());
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const Vec& a = points[static_cast<std::size_t>(tris[t][0])];
    const Vec n = normalized(cross(points[static_cast<std::size_t>(tris[t][1])] - a,
                                   points[static_cast<std::size_t>(tris[t][2])] - a));
    tri_plane[t] = {n, dot(n, a)};
  }
  std::map<std::pair<int, int>, int> edge_tri;
  for (std::size_t t = 0; t < tris.size(); ++t)
    for (int k = 0; k < 3; ++k) edge_tri[{tris[t][k], tris[t][(k + 1) % 3]}] = static_cast<int>(t);
  std::vector<int> parent(tris.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  for (std::size_t t = 0; t < tris.size(); ++t)
    for (int k = 0; k < 3; ++k) {
      auto it = edge_tri.find({tris[t][(k + 1) % 3], tris[t][k]});
      if (it == edge_tri.end()) continue;
      const auto& p = tri_plane[t];
      const auto& q = tri_plane[static_cast<std::size_t>(it->second)];
      if (dot(p.n, q.n) > 1.0 - 1e-12 && std::abs(p.off - q.off) <= kAbsTol)
        parent[static_cast<std::size_t>(find(static_cast<int>(t)))] = find(it->second);
    }
  std::map<int, std::vector<int>> groups;
  for (std::size_t t = 0; t < tris.size(); ++t) groups[find(static_cast<int>(t))].push_back(static_cast<int>(t));
  std::map<int, int> vmap;
  std::vector<Vec> verts;
  auto vid = [&](int i) {
    auto [it, ins] = vmap.try_emplace(i, static_cast<int>(verts.size()));
    if (ins) verts.push_back(points[static_cast<std::size_t>(i)]);
    return it->second;
  };
  std::vector<Halfspace> facets;
  std::vector<int> src;
  std::vector<std::vector<int>> fv;
  for (auto& [root, ts] : groups) {
    // Boundary edges of the group, chained into a loop.
    std::map<std::pair<int, int>, int> count;
    for (int t : ts)
      for (int k = 0; k < 3; ++k) count[{tris[static_cast<std::size_t>(t)][k], tris[static_cast<std::size_t>(t)][(k + 1) % 3]}]++;
    std::map<int, int> next;
    for (auto& [e, c] : count)
      if (!count.count({e.second, e.first})) next[e.first] = e.second;
    if (next.size() < 3) continue;
    std::vector<int> loop;
    int start = next.begin()->first, cur = start;
    do {
      loop.push_back(vid(cur));
      cur = next[cur];
    } while (cur != start && loop.size() <= next.size());
    // Average the plane over the group's triangles.
    Vec n;
    for (int t : ts) n += tri_plane[static_cast<std::size_t>(t)].n;
    n = normalized(n);
    double off = -std::numeric_limits<double>::infinity();
    for (int i : loop) off = std::max(off, dot(n, verts[static_cast<std::size_t>(i)]));
    facets.push_back({n, off});
    src.push_back(static_cast<int>(facets.size()) - 1);
    fv.push_back(std::move(loop));
  }
  return finish(Polytope(3, std::move(facets), std::move(src), std::move(verts), std::move(fv)),
                "convex_hull");
}

std::optional<Vec> separating_direction(const Polytope& a, const Polytope& b, double tol) {
  auto separates = [&](const Vec& u) { return a.support(u) <= -b.support(-u) + tol; };
  for (const Halfspace& h : a.facets())
    if (separates(h.normal)) return h.normal;
  for (const Halfspace& h : b.facets())
    if (separates(-h.normal)) return -h.normal;
  if (a.dim() == 3) {
    for (auto [i, j] : a.edges()) {
      const Vec da = a.vertices()[static_cast<std::size_t>(j)] - a.vertices()[static_cast<std::size_t>(i)];
      for (auto [k, l] : b.edges()) {
        const Vec db = b.vertices()[static_cast<std::size_t>(l)] - b.vertices()[static_cast<std::size_t>(k)];
        const Vec n = cross(da, db);
        const double len = norm(n);
        if (len <= 1e-14) continue;
        const Vec u = n / len;
        if (separates(u)) return u;
        if (separates(-u)) return -u;
      }
    }
  }
  return std::nullopt;
}

}  // namespace polyapprox

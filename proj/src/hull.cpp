#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "polyapprox/polytope.hpp"

namespace polyapprox::detail {

namespace {

double orient2(const Vec& a, const Vec& b, const Vec& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

}  // namespace

std::vector<int> hull_2d(std::span<const Vec> pts, double tol) {
  std::vector<int> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    const Vec& p = pts[static_cast<std::size_t>(a)];
    const Vec& q = pts[static_cast<std::size_t>(b)];
    return p[0] < q[0] || (p[0] == q[0] && p[1] < q[1]);
  });
  idx.erase(std::unique(idx.begin(), idx.end(),
                        [&](int a, int b) {
                          return pts[static_cast<std::size_t>(a)][0] == pts[static_cast<std::size_t>(b)][0] &&
                                 pts[static_cast<std::size_t>(a)][1] == pts[static_cast<std::size_t>(b)][1];
                        }),
            idx.end());
  if (idx.size() < 3) return idx;
  std::vector<int> hull(2 * idx.size());
  std::size_t k = 0;
  auto at = [&](int i) -> const Vec& { return pts[static_cast<std::size_t>(i)]; };
  for (int i : idx) {
    while (k >= 2 && orient2(at(hull[k - 2]), at(hull[k - 1]), at(i)) <= tol) --k;
    hull[k++] = i;
  }
  const std::size_t lower = k + 1;
  for (auto it = idx.rbegin() + 1; it != idx.rend(); ++it) {
    while (k >= lower && orient2(at(hull[k - 2]), at(hull[k - 1]), at(*it)) <= tol) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

namespace {

struct Face {
  std::array<int, 3> v;
  std::array<int, 3> nb;  // neighbour across edge (v[k], v[k+1])
  Vec n;
  double off = 0.0;
  bool alive = true;
  std::vector<int> outside;
};

class QuickHull {
 public:
  QuickHull(std::span<const Vec> pts, double tol) : pts_(pts), tol_(tol) {}

  std::vector<std::array<int, 3>> run() {
    initial_simplex();
    std::vector<int> stack;
    for (std::size_t f = 0; f < faces_.size(); ++f) stack.push_back(static_cast<int>(f));
    while (!stack.empty()) {
      const int f = stack.back();
      stack.pop_back();
      if (!faces_[static_cast<std::size_t>(f)].alive || faces_[static_cast<std::size_t>(f)].outside.empty())
        continue;
      for (int nf : add_point(f)) stack.push_back(nf);
    }
    std::vector<std::array<int, 3>> out;
    for (const Face& face : faces_)
      if (face.alive) out.push_back(face.v);
    return out;
  }

 private:
  const Vec& P(int i) const { return pts_[static_cast<std::size_t>(i)]; }
  Face& F(int f) { return faces_[static_cast<std::size_t>(f)]; }

  double height(const Face& f, int i) const { return dot(f.n, P(i)) - f.off; }

  int make_face(int a, int b, int c) {
    Face f;
    f.v = {a, b, c};
    f.nb = {-1, -1, -1};
    f.n = normalized(cross(P(b) - P(a), P(c) - P(a)));
    f.off = dot(f.n, P(a));
    faces_.push_back(std::move(f));
    return static_cast<int>(faces_.size()) - 1;
  }

  void initial_simplex() {
    const int n = static_cast<int>(pts_.size());
    if (n < 4) throw GeometryError("convex hull: fewer than four points");
    int i0 = 0, i1 = 0;
    double best = -1.0;
    for (int axis = 0; axis < 3; ++axis) {
      int lo = 0, hi = 0;
      for (int i = 1; i < n; ++i) {
        if (P(i)[axis] < P(lo)[axis]) lo = i;
        if (P(i)[axis] > P(hi)[axis]) hi = i;
      }
      if (P(hi)[axis] - P(lo)[axis] > best) {
        best = P(hi)[axis] - P(lo)[axis];
        i0 = lo;
        i1 = hi;
      }
    }
    const Vec dir = normalized(P(i1) - P(i0));
    int i2 = -1;
    best = tol_;
    for (int i = 0; i < n; ++i) {
      const Vec w = P(i) - P(i0);
      const double d = norm(w - dot(w, dir) * dir);
      if (d > best) {
        best = d;
        i2 = i;
      }
    }
    if (i2 < 0) throw GeometryError("convex hull: points are collinear");
    const Vec pn = normalized(cross(P(i1) - P(i0), P(i2) - P(i0)));
    int i3 = -1;
    best = tol_;
    for (int i = 0; i < n; ++i) {
      const double d = std::abs(dot(pn, P(i) - P(i0)));
      if (d > best) {
        best = d;
        i3 = i;
      }
    }
    if (i3 < 0) throw GeometryError("convex hull: points are coplanar");
    if (dot(pn, P(i3) - P(i0)) > 0) std::swap(i1, i2);
    // Now i3 lies below the plane (i0, i1, i2) oriented outward.
    const int f0 = make_face(i0, i1, i2);
    const int f1 = make_face(i0, i3, i1);
    const int f2 = make_face(i1, i3, i2);
    const int f3 = make_face(i2, i3, i0);
    link_all({f0, f1, f2, f3});
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    assign(all, {f0, f1, f2, f3});
  }

  // Sets neighbour pointers among a set of faces by matching opposite edges.
  void link_all(const std::vector<int>& fs) {
    for (int a : fs)
      for (int k = 0; k < 3; ++k)
        for (int b : fs) {
          if (a == b) continue;
          for (int m = 0; m < 3; ++m)
            if (F(a).v[static_cast<std::size_t>(k)] == F(b).v[static_cast<std::size_t>((m + 1) % 3)] &&
                F(a).v[static_cast<std::size_t>((k + 1) % 3)] == F(b).v[static_cast<std::size_t>(m)])
              F(a).nb[static_cast<std::size_t>(k)] = b;
        }
  }

  void assign(const std::vector<int>& points, const std::vector<int>& fs) {
    for (int i : points) {
      for (int f : fs) {
        if (height(F(f), i) > tol_) {
          F(f).outside.push_back(i);
          break;
        }
      }
    }
  }

  std::vector<int> add_point(int f0) {
    const Face& start = F(f0);
    int apex = start.outside.front();
    double best = height(start, apex);
    for (int i : start.outside) {
      const double h = height(start, i);
      if (h > best) {
        best = h;
        apex = i;
      }
    }
    // Visible faces reachable from f0.
    std::vector<int> visible{f0};
    std::vector<char> is_visible(faces_.size(), 0);
    is_visible[static_cast<std::size_t>(f0)] = 1;
    for (std::size_t q = 0; q < visible.size(); ++q) {
      const int f = visible[q];
      for (int nb : F(f).nb) {
        if (nb < 0 || is_visible[static_cast<std::size_t>(nb)]) continue;
        if (height(F(nb), apex) > tol_) {
          is_visible[static_cast<std::size_t>(nb)] = 1;
          visible.push_back(nb);
        }
      }
    }
    // Horizon edges (a, b) with the hidden neighbour across them.
    struct HorizonEdge {
      int a, b, hidden, hidden_slot;
    };
    std::vector<HorizonEdge> horizon;
    for (int f : visible)
      for (int k = 0; k < 3; ++k) {
        const int nb = F(f).nb[static_cast<std::size_t>(k)];
        if (is_visible[static_cast<std::size_t>(nb)]) continue;
        const int a = F(f).v[static_cast<std::size_t>(k)];
        const int b = F(f).v[static_cast<std::size_t>((k + 1) % 3)];
        int slot = 0;
        for (int m = 0; m < 3; ++m)
          if (F(nb).v[static_cast<std::size_t>(m)] == b) slot = m;
        horizon.push_back({a, b, nb, slot});
      }
    std::vector<int> orphans;
    for (int f : visible) {
      F(f).alive = false;
      for (int i : F(f).outside)
        if (i != apex) orphans.push_back(i);
      F(f).outside.clear();
      F(f).outside.shrink_to_fit();
    }
    std::vector<int> created;
    std::unordered_map<int, int> by_start, by_end;
    for (const HorizonEdge& e : horizon) {
      const int nf = make_face(e.a, e.b, apex);
      F(nf).nb[0] = e.hidden;
      F(e.hidden).nb[static_cast<std::size_t>(e.hidden_slot)] = nf;
      by_start[e.a] = nf;
      by_end[e.b] = nf;
      created.push_back(nf);
    }
    for (int nf : created) {
      // Edge (b, apex) borders the face starting at b; edge (apex, a) the face ending at a.
      F(nf).nb[1] = by_start.at(F(nf).v[1]);
      F(nf).nb[2] = by_end.at(F(nf).v[0]);
    }
    assign(orphans, created);
    return created;
  }

  std::span<const Vec> pts_;
  double tol_;
  std::vector<Face> faces_;
};

}  // namespace

std::vector<std::array<int, 3>> hull_3d(std::span<const Vec> pts, double tol) {
  return QuickHull(pts, tol).run();
}

}  // namespace polyapprox::detail

#include "polyapprox/caps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace polyapprox {

namespace {

constexpr int kCutTag = 1 << 29;

Polytope point_region(const Vec& z, int k) { return Polytope(k, {}, {}, {z}, {}); }

// Convex region of dimension k spanned by points; a point region when flat.
Polytope region_from_points(const std::vector<Vec>& pts, int k, bool& degenerate) {
  degenerate = false;
  if (k == 1) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Vec& p : pts) lo = std::min(lo, p[0]), hi = std::max(hi, p[0]);
    if (hi - lo <= 1e-14) {
      degenerate = true;
      return point_region(Vec{0.5 * (lo + hi)}, 1);
    }
    const std::vector<Halfspace> hs{{Vec{1.0}, hi}, {Vec{-1.0}, -lo}};
    return halfspace_intersection(1, hs);
  }
  try {
    return convex_hull(k, pts);
  } catch (const GeometryError&) {
    degenerate = true;
    Vec c{};
    for (const Vec& p : pts) c = c + p;
    return point_region(c / static_cast<double>(pts.size()), k);
  }
}

std::vector<Vec> ray_directions(int k, int rays) {
  if (k == 1) return {Vec{1.0}, Vec{-1.0}};
  return direction_net(2, static_cast<std::size_t>(rays));
}

// Largest s with z + s*theta in the domain.
double domain_reach(const Polytope& domain, const Vec& z, const Vec& theta) {
  double s = std::numeric_limits<double>::infinity();
  for (const Halfspace& h : domain.facets()) {
    const double rate = dot(h.normal, theta);
    if (rate > 1e-15) s = std::min(s, std::max(0.0, (h.offset - dot(h.normal, z)) / rate));
  }
  return s;
}

bool on_domain_boundary(const Polytope& domain, const Vec& z) { return domain.max_violation(z) > -1e-9; }

// Lower halfspace of h(q) shifted up by `lift_by`: y - <a_q, z> <= -b_q + lift_by.
Halfspace below_plane(const AugmentedPoint& q, int d, double lift_by) {
  return Halfspace::from_raw(lift(-1.0 * horizontal(q.slope, d), 1.0, d), -q.offset + lift_by);
}

Vec horizontal_part(const Vec& p, int d) {
  Vec z{};
  for (int i = 0; i < d - 1; ++i) z[i] = p[i];
  return z;
}

Polytope hull_with_apex(const UShape& u, const Vec& apex) {
  std::vector<Vec> pts = u.polytope().vertices();
  pts.push_back(apex);
  return convex_hull(u.dim(), pts);
}

Vec sample_in(const Polytope& p, std::mt19937_64& rng) {
  const Box b = p.bounding_box();
  std::uniform_real_distribution<double> t(0.0, 1.0);
  for (;;) {
    Vec x{};
    for (int i = 0; i < p.dim(); ++i) x[i] = b.lo[i] + t(rng) * (b.hi[i] - b.lo[i]);
    if (p.contains(x, 0.0)) return x;
  }
}

}  // namespace

bool Cap::contains(const Vec& z, double tol) const {
  if (degenerate) return dist(z, base.vertices().front()) <= tol;
  return base.contains(z, tol);
}

bool DualCap::member(const AugmentedPoint& p, int d, double tol) const {
  const Vec z = horizontal(q.point, d);
  return q.point[d - 1] - eps <= p.plane_at(z) + tol;
}

Cap cap(const UShape& u, const AugmentedPoint& q, double eps, int rays) {
  const int d = u.dim();
  const int k = d - 1;
  Cap out{q, eps, {}, false, false};
  const Vec zq = horizontal(q.point, d);
  if (const auto* pl = dynamic_cast<const PLUShape*>(&u)) {
    std::vector<Halfspace> hs;
    for (const auto& p : pl->planes()) {
      const Vec n = horizontal(p.slope, d) - horizontal(q.slope, d);
      const double c = p.offset - q.offset + eps;
      if (norm(n) < 1e-14) continue;
      hs.push_back(Halfspace::from_raw(n, c));
    }
    const int walls = static_cast<int>(hs.size());
    for (const Halfspace& h : u.domain().facets()) hs.push_back(h);
    try {
      out.base = halfspace_intersection(k, hs);
      for (int s : out.base.facet_source()) out.touches_domain = out.touches_domain || s >= walls;
    } catch (const GeometryError&) {
      out.degenerate = true;
      out.base = point_region(zq, k);
    }
    return out;
  }
  std::vector<Vec> pts;
  for (const Vec& theta : ray_directions(k, rays)) {
    const double reach = domain_reach(u.domain(), zq, theta);
    const auto excess = [&](double s) {
      const Vec z = zq + s * theta;
      return u.height(z) - q.plane_at(z);
    };
    double rho;
    if (excess(reach) <= eps) {
      rho = reach;
      out.touches_domain = true;
    } else {
      double lo = 0.0, hi = reach;
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) <= eps ? lo : hi) = mid;
      }
      rho = 0.5 * (lo + hi);
    }
    pts.push_back(zq + rho * theta);
  }
  out.base = region_from_points(pts, k, out.degenerate);
  return out;
}

DualCap dual_cap(const UShape& u, const AugmentedPoint& q, double eps, int rays) {
  const int d = u.dim();
  const int k = d - 1;
  DualCap out{q, eps, {}, false, false};
  const Vec zq = horizontal(q.point, d);
  if (dynamic_cast<const PLUShape*>(&u) != nullptr && eps > 0.0) {
    const Polytope hull = hull_with_apex(u, out.apex(d));
    const std::vector<Halfspace> cut{below_plane(q, d, 0.0)};
    const auto t = try_clip(hull, cut, kCutTag);
    std::vector<Vec> pts;
    if (t) {
      for (std::size_t f = 0; f < t->facets().size(); ++f)
        if (t->facet_source()[f] == kCutTag)
          for (int v : t->facet_vertices()[f]) pts.push_back(horizontal_part(t->vertices()[v], d));
    }
    if (pts.empty()) pts.push_back(zq);
    out.base = region_from_points(pts, k, out.degenerate);
    for (const Vec& v : out.base.vertices()) out.touches_domain = out.touches_domain || on_domain_boundary(u.domain(), v);
    return out;
  }
  std::vector<Vec> pts;
  for (const Vec& theta : ray_directions(k, rays)) {
    const double reach = domain_reach(u.domain(), zq, theta);
    const auto ratio = [&](double s) {
      const Vec z = zq + s * theta;
      return eps * s / (eps + u.height(z) - q.plane_at(z));
    };
    // Quasi-concave along the ray: golden-section search.
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 0.0, b = reach;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = ratio(x1), f2 = ratio(x2);
    for (int it = 0; it < 300 && b - a > 1e-15; ++it) {
      if (f1 < f2) {
        a = x1, x1 = x2, f1 = f2, x2 = a + g * (b - a), f2 = ratio(x2);
      } else {
        b = x2, x2 = x1, f2 = f1, x1 = b - g * (b - a), f1 = ratio(x1);
      }
    }
    double rho = std::max({f1, f2, ratio(reach)});
    if (ratio(reach) >= std::max(f1, f2)) out.touches_domain = true;
    if (eps == 0.0) rho = 0.0;
    pts.push_back(zq + rho * theta);
  }
  out.base = region_from_points(pts, k, out.degenerate);
  return out;
}

CapRatioBodies cap_ratio_bodies(const UShape& u, const AugmentedPoint& q, double eps) {
  const int d = u.dim();
  CapRatioBodies out;
  out.apex = q.point - eps * unit_axis(d - 1);
  const Polytope hull = hull_with_apex(u, out.apex);
  const std::vector<Halfspace> cut{below_plane(q, d, 0.0)};
  out.t = clip(hull, cut, kCutTag);
  out.t_prime = out.t.scaled(2.0, out.apex);
  const std::vector<Halfspace> raised{below_plane(q, d, eps)};
  out.slab = clip(u.polytope(), raised, kCutTag);
  return out;
}

CapRatioReport check_cap_ratio(const UShape& u, const AugmentedPoint& q, double eps, std::size_t samples,
                               std::uint64_t seed) {
  const int d = u.dim();
  const CapRatioBodies b = cap_ratio_bodies(u, q, eps);
  const DualCap dc = dual_cap(u, q, eps);
  std::mt19937_64 rng(seed);
  CapRatioReport r;
  r.samples = samples;
  const Vec up = eps * unit_axis(d - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec x = sample_in(b.t, rng) + up;
    if (!b.slab.contains(x, kAbsTol)) ++r.violations;
    const Vec z = horizontal(x, d);
    if (u.in_domain(z) && !dc.member(u.lower_point(z), d)) ++r.projection_misses;
    const Vec y = sample_in(b.slab, rng);
    if (!b.t_prime.contains(y, kAbsTol)) ++r.violations;
  }
  const double vt = b.t.volume();
  r.volume_ratio = b.slab.volume() / vt;
  const double base_area = dc.degenerate ? 0.0 : dc.base.volume();
  r.cone_constant = base_area > 0.0 ? vt / (eps * base_area) : 0.0;
  return r;
}

Equivalence check_equivalence(const UShape& u_star, const AugmentedPoint& q, double eps,
                              const AugmentedPoint& p_prime) {
  const int d = u_star.dim();
  const AugmentedPoint p = correspond(q, d);
  Equivalence e;
  e.in_cap = cap(u_star, p, eps).contains(horizontal(p_prime.point, d), 0.0);
  const DualCap dc{q, eps, {}, false, false};
  e.in_dual_cap = dc.member(correspond(p_prime, d), d, 0.0);
  return e;
}

double base_polarity_residual(const UShape& u, const UShape& u_star, const AugmentedPoint& q, double eps,
                              int directions) {
  const int d = u.dim();
  const int k = d - 1;
  const AugmentedPoint p = correspond(q, d);
  const DualCap dc = dual_cap(u, q, eps, directions);
  const Cap c = cap(u_star, p, eps, directions);
  if (dc.degenerate || c.degenerate) throw GeometryError("base_polarity_residual: degenerate base");
  const Vec zq = horizontal(q.point, d), zp = horizontal(p.point, d);
  std::vector<double> room;
  for (const Halfspace& h : c.base.facets()) {
    room.push_back(h.offset - dot(h.normal, zp));
    if (room.back() <= 1e-14) throw GeometryError("base_polarity_residual: p on the cap boundary");
  }
  double worst = 0.0;
  for (const Vec& theta : ray_directions(k, directions)) {
    const double lhs = dc.base.support(theta) - dot(theta, zq);
    double gauge = 0.0;
    for (std::size_t f = 0; f < room.size(); ++f)
      gauge = std::max(gauge, dot(c.base.facets()[f].normal, theta) / room[f]);
    worst = std::max(worst, std::abs(lhs - eps * gauge));
  }
  return worst;
}

double inner_radius(const Polytope& region, const Vec& z) {
  if (region.facets().empty()) return 0.0;
  double r = std::numeric_limits<double>::infinity();
  for (const Halfspace& h : region.facets()) r = std::min(r, h.offset - dot(h.normal, z));
  return std::max(r, 0.0);
}

}  // namespace polyapprox
